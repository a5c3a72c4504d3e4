// Websocket session wrapper: connect, handshake, message dispatch, and the
// idle -> active -> ended phase machine. The endpoint never enters client
// state; the only coordinates held are the participant's own cursor.

import { MalformedPayload, ServerMessage, TrialStarted, parseServerMessage } from './protocol'

export type Phase = 'idle' | 'active' | 'ended'

export interface ClientCallbacks {
  onMessage: (msg: ServerMessage) => void
  onPhase: (phase: Phase) => void
  onBanner: (text: string) => void
}

export class LiveClient {
  private ws: WebSocket | null = null
  phase: Phase = 'idle'
  trial: TrialStarted | null = null

  constructor(private callbacks: ClientCallbacks) {}

  connect(participant: string): void {
    const proto = location.protocol === 'https:' ? 'wss' : 'ws'
    const ws = new WebSocket(`${proto}://${location.host}/ws`)
    this.ws = ws
    ws.onopen = () => {
      ws.send(JSON.stringify({ type: 'hello', participant }))
    }
    ws.onmessage = (ev) => this.handleFrame(String(ev.data))
    ws.onclose = () => {
      this.setPhase('idle')
      this.callbacks.onBanner('connection lost')
    }
  }

  private handleFrame(raw: string): void {
    let msg: ServerMessage
    try {
      msg = parseServerMessage(raw)
    } catch (err) {
      if (err instanceof MalformedPayload) {
        this.callbacks.onBanner(`malformed payload: ${err.message}`)
        this.abort()
        return
      }
      throw err
    }
    if (msg.type === 'trial_started') {
      this.trial = msg
      this.setPhase('active')
    } else if (msg.type === 'trial_ended') {
      this.setPhase('ended')
    } else if (msg.type === 'error') {
      this.callbacks.onBanner(`${msg.code}: ${msg.msg}`)
    }
    this.callbacks.onMessage(msg)
  }

  private setPhase(phase: Phase): void {
    this.phase = phase
    this.callbacks.onPhase(phase)
  }

  startTrial(mode: string): void {
    this.ws?.send(JSON.stringify({ type: 'start_trial', mode }))
  }

  sendCursor(x: number, y: number, tClient: number): void {
    if (this.phase !== 'active') return // streaming stops with the trial
    this.ws?.send(JSON.stringify({ type: 'cursor', x, y, t_client: tClient }))
  }

  abort(): void {
    this.ws?.send(JSON.stringify({ type: 'abort' }))
  }
}
