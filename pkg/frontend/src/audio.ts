// Audio proxies for the haptic channel: an amplitude-modulated buzz for
// vibration feedback and speech + metronome clicks for voice prompts.

import { VoicePlan } from './feedback'

export class AudioProxies {
  private ctx: AudioContext | null = null
  private buzzGain: GainNode | null = null
  private clickTimer: number | null = null
  enabled = false

  private ensureContext(): AudioContext {
    if (this.ctx === null) {
      this.ctx = new AudioContext()
      const osc = this.ctx.createOscillator()
      osc.type = 'sawtooth'
      osc.frequency.value = 140 // rough rotor-motor hum
      this.buzzGain = this.ctx.createGain()
      this.buzzGain.gain.value = 0
      osc.connect(this.buzzGain).connect(this.ctx.destination)
      osc.start()
    }
    return this.ctx
  }

  setBuzz(level: number): void {
    if (!this.enabled) return
    this.ensureContext()
    // keep the proxy quiet; duty 1.0 maps to a modest gain
    this.buzzGain!.gain.setTargetAtTime(level * 0.12, this.ctx!.currentTime, 0.02)
  }

  speak(word: string): void {
    if (!this.enabled || !('speechSynthesis' in window)) return
    const utterance = new SpeechSynthesisUtterance(word)
    utterance.rate = 1.2
    window.speechSynthesis.speak(utterance)
  }

  setClickTrack(plan: VoicePlan | null): void {
    if (this.clickTimer !== null) {
      window.clearInterval(this.clickTimer)
      this.clickTimer = null
    }
    if (plan === null || !this.enabled) return
    this.ensureContext()
    this.clickTimer = window.setInterval(() => this.click(), plan.clickIntervalMs)
  }

  private click(): void {
    const ctx = this.ensureContext()
    const osc = ctx.createOscillator()
    const gain = ctx.createGain()
    osc.frequency.value = 900
    gain.gain.setValueAtTime(0.15, ctx.currentTime)
    gain.gain.exponentialRampToValueAtTime(1e-4, ctx.currentTime + 0.04)
    osc.connect(gain).connect(ctx.destination)
    osc.start()
    osc.stop(ctx.currentTime + 0.05)
  }

  stopAll(): void {
    this.setClickTrack(null)
    if (this.buzzGain !== null && this.ctx !== null) {
      this.buzzGain.gain.setTargetAtTime(0, this.ctx.currentTime, 0.02)
    }
    if ('speechSynthesis' in window) window.speechSynthesis.cancel()
  }
}
