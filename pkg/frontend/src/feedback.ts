// Pure mapping from feedback payloads to render/audio parameters.
// Browsers cannot drive vibration motors, so duty cycles become glyph
// opacity (and buzz loudness): opacity is affine in duty with slope 1 and
// intercept 0, i.e. a 0.5 duty renders at exactly 50% opacity.

import { FeedbackMsg, VoiceMsg } from './protocol'

export type GlyphSlot = 'right' | 'front' | 'left' | 'back'

export interface Glyph {
  slot: GlyphSlot
  opacity: number
}

// Glyphs sit around the cursor: right of it, above (front), left, below.
export const GLYPH_OFFSETS: Record<GlyphSlot, [number, number]> = {
  right: [1, 0],
  front: [0, -1], // canvas y grows downward; "front" renders above
  left: [-1, 0],
  back: [0, 1],
}

export function glyphsForFeedback(fb: FeedbackMsg): Glyph[] {
  const pairs: [GlyphSlot, number][] = [
    ['right', fb.m1],
    ['front', fb.m2],
    ['left', fb.m3],
    ['back', fb.m4],
  ]
  return pairs
    .filter(([, duty]) => duty > 0)
    .map(([slot, duty]) => ({ slot, opacity: duty }))
}

// Loudness proxy for the vibration channel: the strongest motor wins.
export function buzzGainForFeedback(fb: FeedbackMsg): number {
  return Math.max(fb.m1, fb.m2, fb.m3, fb.m4)
}

export interface VoicePlan {
  word: string
  clickIntervalMs: number
}

// One spoken word per message plus a click track at the alert rate.
export function voicePlan(msg: VoiceMsg): VoicePlan {
  return {
    word: msg.word,
    clickIntervalMs: 1000 / msg.freq_hz,
  }
}

// Times (ms, from now) of metronome clicks over a horizon at the cue rate.
export function clickSchedule(plan: VoicePlan, horizonMs: number): number[] {
  const out: number[] = []
  for (let t = 0; t < horizonMs; t += plan.clickIntervalMs) {
    out.push(t)
  }
  return out
}
