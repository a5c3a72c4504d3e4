// Trial client: canvas rendering loop, cursor capture, settings, and the
// experimenter reveal overlay (shown only when the server sent
// reveal_endpoint, i.e. it was launched with --reveal).

import { AudioProxies } from './audio'
import {
  GLYPH_OFFSETS,
  Glyph,
  buzzGainForFeedback,
  glyphsForFeedback,
  voicePlan,
} from './feedback'
import { LiveClient, Phase } from './client'
import { ServerMessage } from './protocol'
import { CursorStreamPolicy, arenaToCanvas, canvasToArena } from './stream'

const canvas = document.getElementById('arena') as HTMLCanvasElement
const ctxOrNull = canvas.getContext('2d')
if (ctxOrNull === null) throw new Error('no 2d context')
const ctx = ctxOrNull

const banner = document.getElementById('banner') as HTMLDivElement
const startVb = document.getElementById('start-vb') as HTMLButtonElement
const startVbStaged = document.getElementById('start-vb-staged') as HTMLButtonElement
const startVp = document.getElementById('start-vp') as HTMLButtonElement
const audioToggle = document.getElementById('audio') as HTMLInputElement
const blindToggle = document.getElementById('audio-only') as HTMLInputElement
const velocityToggle = document.getElementById('velocity-mode') as HTMLInputElement
const revealToggle = document.getElementById('reveal-overlay') as HTMLInputElement
const glyphScaleInput = document.getElementById('glyph-scale') as HTMLInputElement
const statusLine = document.getElementById('status') as HTMLDivElement

const audio = new AudioProxies()
const stream = new CursorStreamPolicy({ maxRateHz: 60, heartbeatS: 1 })

let glyphs: Glyph[] = []
let cursorPx: [number, number] = [canvas.width / 2, canvas.height / 2]
let moved = false
let trialStart = 0
let revealPoint: [number, number] | null = null

function showBanner(text: string): void {
  banner.textContent = text
  banner.style.display = text ? 'block' : 'none'
}

const client = new LiveClient({
  onMessage: handleMessage,
  onPhase: handlePhase,
  onBanner: showBanner,
})

function handlePhase(phase: Phase): void {
  statusLine.textContent = `phase: ${phase}`
  if (phase === 'active') {
    trialStart = performance.now()
    glyphs = []
    revealPoint = null
    stream.reset()
    showBanner('')
    // the protocol assumes the trial begins at the arena center
    cursorPx = [canvas.width / 2, canvas.height / 2]
  } else {
    glyphs = []
    audio.stopAll()
  }
}

function handleMessage(msg: ServerMessage): void {
  switch (msg.type) {
    case 'trial_started':
      if (msg.reveal_endpoint) revealPoint = msg.reveal_endpoint
      break
    case 'feedback':
      glyphs = glyphsForFeedback(msg)
      audio.setBuzz(buzzGainForFeedback(msg))
      break
    case 'voice': {
      const plan = voicePlan(msg)
      audio.speak(plan.word) // exactly one spoken word per message
      audio.setClickTrack(plan)
      break
    }
    case 'trial_ended':
      showBanner(
        msg.outcome.success
          ? `reached in ${msg.outcome.completion_time.toFixed(1)} s`
          : `trial ended (${msg.reason})`,
      )
      break
  }
}

// --- input -----------------------------------------------------------------

canvas.addEventListener('mousemove', (ev) => {
  if (client.phase !== 'active') return
  const rect = canvas.getBoundingClientRect()
  if (velocityToggle.checked) {
    cursorPx = [
      Math.min(Math.max(cursorPx[0] + ev.movementX, 0), canvas.width),
      Math.min(Math.max(cursorPx[1] + ev.movementY, 0), canvas.height),
    ]
  } else {
    cursorPx = [ev.clientX - rect.left, ev.clientY - rect.top]
  }
  moved = true
})

startVb.addEventListener('click', () => client.startTrial('vb'))
startVbStaged.addEventListener('click', () => client.startTrial('vb-staged'))
startVp.addEventListener('click', () => client.startTrial('vp'))
audioToggle.addEventListener('change', () => {
  audio.enabled = audioToggle.checked
  if (!audio.enabled) audio.stopAll()
})

// --- render + stream loop ----------------------------------------------------

function frame(nowMs: number): void {
  if (client.phase === 'active' && client.trial) {
    if (stream.shouldSend(nowMs, moved)) {
      const [ax, ay] = canvasToArena(
        cursorPx[0], cursorPx[1], canvas.width, canvas.height, client.trial.arena,
      )
      client.sendCursor(ax, ay, (nowMs - trialStart) / 1000)
      moved = false
    }
  }
  draw()
  requestAnimationFrame(frame)
}

function draw(): void {
  ctx.clearRect(0, 0, canvas.width, canvas.height)
  ctx.fillStyle = '#111'
  ctx.fillRect(0, 0, canvas.width, canvas.height)

  const blind = blindToggle.checked
  const [cx, cy] = cursorPx

  if (revealToggle.checked && revealPoint !== null && client.trial) {
    const [ex, ey] = arenaToCanvas(
      revealPoint[0], revealPoint[1], canvas.width, canvas.height, client.trial.arena,
    )
    ctx.strokeStyle = '#d33'
    ctx.beginPath()
    ctx.arc(ex, ey, 12, 0, Math.PI * 2)
    ctx.stroke()
  }

  if (!blind) {
    const scale = Number(glyphScaleInput.value) || 1
    const offset = 34 * scale
    const radius = 12 * scale
    for (const glyph of glyphs) {
      const [gx, gy] = GLYPH_OFFSETS[glyph.slot]
      ctx.globalAlpha = glyph.opacity
      ctx.fillStyle = '#4cc2ff'
      ctx.beginPath()
      ctx.arc(cx + gx * offset, cy + gy * offset, radius, 0, Math.PI * 2)
      ctx.fill()
      ctx.globalAlpha = 1
    }
  }

  ctx.fillStyle = '#eee'
  ctx.beginPath()
  ctx.arc(cx, cy, 5, 0, Math.PI * 2)
  ctx.fill()
}

const participant = new URLSearchParams(location.search).get('participant') ?? 'anonymous'
client.connect(participant)
requestAnimationFrame(frame)
