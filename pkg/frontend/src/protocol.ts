// Wire schema for the live-trial websocket. One compact JSON object per
// frame, discriminated by "type". The schema has no field that could carry
// the endpoint before trial_ended (reveal_endpoint only appears when the
// server runs with --reveal, which refuses logged sessions).

export interface HelloOk {
  type: 'hello_ok'
  session_id: string
}

export interface TrialStarted {
  type: 'trial_started'
  trial_id: number
  mode: 'vb' | 'vb-staged' | 'vp'
  arena: [number, number]
  completion_radius: number
  max_duration: number
  reveal_endpoint?: [number, number]
}

export interface FeedbackMsg {
  type: 'feedback'
  m1: number
  m2: number
  m3: number
  m4: number
  stage: 'horizontal' | 'vertical' | null
}

export interface VoiceMsg {
  type: 'voice'
  word: 'forward' | 'backward' | 'left' | 'right'
  freq_hz: number
}

export interface TrialEnded {
  type: 'trial_ended'
  trial_id: number
  reason: string
  outcome: {
    success: boolean
    completion_time: number
    final_error_x: number
    final_error_y: number
  }
  endpoint: [number, number]
}

export interface ErrorMsg {
  type: 'error'
  code: string
  msg: string
}

export type ServerMessage =
  | HelloOk
  | TrialStarted
  | FeedbackMsg
  | VoiceMsg
  | TrialEnded
  | ErrorMsg

const VOICE_WORDS = ['forward', 'backward', 'left', 'right']
const ALERT_FREQS = [0.4, 1.0, 2.0]

function isDuty(v: unknown): v is number {
  return typeof v === 'number' && isFinite(v) && v >= 0 && v <= 1
}

export class MalformedPayload extends Error {}

// Parse and validate one server frame; throws MalformedPayload so the UI
// can show the error banner and abort the trial.
export function parseServerMessage(raw: string): ServerMessage {
  let data: any
  try {
    data = JSON.parse(raw)
  } catch {
    throw new MalformedPayload('frame is not JSON')
  }
  if (typeof data !== 'object' || data === null || typeof data.type !== 'string') {
    throw new MalformedPayload('frame has no type')
  }
  switch (data.type) {
    case 'hello_ok':
      if (typeof data.session_id !== 'string') throw new MalformedPayload('bad hello_ok')
      return data
    case 'trial_started':
      if (!Array.isArray(data.arena) || data.arena.length !== 2) {
        throw new MalformedPayload('trial_started needs arena [w, h]')
      }
      return data
    case 'feedback':
      if (![data.m1, data.m2, data.m3, data.m4].every(isDuty)) {
        throw new MalformedPayload('feedback duties must be numbers in [0, 1]')
      }
      return data
    case 'voice':
      if (!VOICE_WORDS.includes(data.word)) {
        throw new MalformedPayload(`unknown word ${data.word}`)
      }
      if (!ALERT_FREQS.includes(data.freq_hz)) {
        throw new MalformedPayload(`unknown alert frequency ${data.freq_hz}`)
      }
      return data
    case 'trial_ended':
      if (typeof data.outcome !== 'object' || data.outcome === null) {
        throw new MalformedPayload('trial_ended needs an outcome')
      }
      return data
    case 'error':
      return data
    default:
      throw new MalformedPayload(`unknown message type ${data.type}`)
  }
}

export type ClientMessage =
  | { type: 'hello'; participant: string; seed?: number }
  | { type: 'start_trial'; mode: string; note?: string }
  | { type: 'cursor'; x: number; y: number; t_client: number }
  | { type: 'abort' }
