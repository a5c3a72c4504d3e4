import assert from 'node:assert/strict'
import { test } from 'node:test'

import {
  buzzGainForFeedback,
  clickSchedule,
  glyphsForFeedback,
  voicePlan,
} from '../src/feedback'
import { FeedbackMsg, VoiceMsg } from '../src/protocol'

function fb(m1: number, m2: number, m3: number, m4: number): FeedbackMsg {
  return { type: 'feedback', m1, m2, m3, m4, stage: null }
}

test('half-duty right motor renders only the right glyph at 50% opacity', () => {
  const glyphs = glyphsForFeedback(fb(0.5, 0, 0, 0))
  assert.equal(glyphs.length, 1)
  assert.equal(glyphs[0].slot, 'right')
  assert.ok(Math.abs(glyphs[0].opacity - 0.5) <= 0.01)
})

test('all-zero feedback renders no glyphs', () => {
  assert.deepEqual(glyphsForFeedback(fb(0, 0, 0, 0)), [])
})

test('each motor maps to its slot', () => {
  assert.equal(glyphsForFeedback(fb(0.3, 0, 0, 0))[0].slot, 'right')
  assert.equal(glyphsForFeedback(fb(0, 0.3, 0, 0))[0].slot, 'front')
  assert.equal(glyphsForFeedback(fb(0, 0, 0.3, 0))[0].slot, 'left')
  assert.equal(glyphsForFeedback(fb(0, 0, 0, 0.3))[0].slot, 'back')
})

test('opacity is affine in duty (slope 1, intercept 0)', () => {
  for (const duty of [0.1, 0.25, 0.5, 0.75, 1.0]) {
    const glyphs = glyphsForFeedback(fb(duty, 0, 0, 0))
    assert.ok(Math.abs(glyphs[0].opacity - duty) < 1e-12)
  }
})

test('oblique feedback renders exactly two glyphs', () => {
  const glyphs = glyphsForFeedback(fb(0.6, 0.7, 0, 0))
  assert.deepEqual(
    glyphs.map((g) => g.slot).sort(),
    ['front', 'right'],
  )
})

test('buzz gain follows the strongest motor', () => {
  assert.equal(buzzGainForFeedback(fb(0.2, 0.8, 0, 0)), 0.8)
  assert.equal(buzzGainForFeedback(fb(0, 0, 0, 0)), 0)
})

test('voice plan keeps exactly the one word from the payload', () => {
  const msg: VoiceMsg = { type: 'voice', word: 'forward', freq_hz: 2.0 }
  const plan = voicePlan(msg)
  assert.equal(plan.word, 'forward')
})

test('click interval matches payload frequency within 5%', () => {
  for (const freq of [0.4, 1.0, 2.0]) {
    const plan = voicePlan({ type: 'voice', word: 'left', freq_hz: freq })
    const achieved = 1000 / plan.clickIntervalMs
    assert.ok(Math.abs(achieved - freq) / freq <= 0.05, `freq ${freq} -> ${achieved}`)
  }
})

test('click schedule spacing equals the interval', () => {
  const plan = voicePlan({ type: 'voice', word: 'right', freq_hz: 2.0 })
  const clicks = clickSchedule(plan, 3000)
  assert.equal(clicks.length, 6)
  for (let i = 1; i < clicks.length; i++) {
    const gap = clicks[i] - clicks[i - 1]
    assert.ok(Math.abs(gap - 500) <= 25)
  }
})
