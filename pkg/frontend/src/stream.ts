// Cursor upstream policy: coalesce motion to at most maxRateHz messages per
// second, but keep a slow heartbeat while stationary so the server's trial
// clock (and timeout watchdog) sees a live client.

export interface StreamOptions {
  maxRateHz?: number
  heartbeatS?: number
}

export class CursorStreamPolicy {
  private minGapMs: number
  private heartbeatMs: number
  private lastSentMs = -Infinity

  constructor(opts: StreamOptions = {}) {
    this.minGapMs = 1000 / (opts.maxRateHz ?? 60)
    this.heartbeatMs = 1000 * (opts.heartbeatS ?? 1)
  }

  // Decide whether to send this frame's cursor position.
  shouldSend(nowMs: number, moved: boolean): boolean {
    const gap = nowMs - this.lastSentMs
    if (moved && gap >= this.minGapMs) {
      this.lastSentMs = nowMs
      return true
    }
    if (!moved && gap >= this.heartbeatMs) {
      this.lastSentMs = nowMs
      return true
    }
    return false
  }

  reset(): void {
    this.lastSentMs = -Infinity
  }
}

// Canvas pixels -> arena meters, using the bounds from trial_started.
export function canvasToArena(
  px: number,
  py: number,
  canvasW: number,
  canvasH: number,
  arena: [number, number],
): [number, number] {
  const [aw, ah] = arena
  const x = Math.min(Math.max((px / canvasW) * aw, 0), aw)
  // canvas y grows downward, arena y grows forward/up
  const y = Math.min(Math.max((1 - py / canvasH) * ah, 0), ah)
  return [x, y]
}

export function arenaToCanvas(
  ax: number,
  ay: number,
  canvasW: number,
  canvasH: number,
  arena: [number, number],
): [number, number] {
  const [aw, ah] = arena
  return [(ax / aw) * canvasW, (1 - ay / ah) * canvasH]
}
