"use strict";
// Cursor upstream policy: coalesce motion to at most maxRateHz messages per
// second, but keep a slow heartbeat while stationary so the server's trial
// clock (and timeout watchdog) sees a live client.
Object.defineProperty(exports, "__esModule", { value: true });
exports.CursorStreamPolicy = void 0;
exports.canvasToArena = canvasToArena;
exports.arenaToCanvas = arenaToCanvas;
class CursorStreamPolicy {
    minGapMs;
    heartbeatMs;
    lastSentMs = -Infinity;
    constructor(opts = {}) {
        this.minGapMs = 1000 / (opts.maxRateHz ?? 60);
        this.heartbeatMs = 1000 * (opts.heartbeatS ?? 1);
    }
    // Decide whether to send this frame's cursor position.
    shouldSend(nowMs, moved) {
        const gap = nowMs - this.lastSentMs;
        if (moved && gap >= this.minGapMs) {
            this.lastSentMs = nowMs;
            return true;
        }
        if (!moved && gap >= this.heartbeatMs) {
            this.lastSentMs = nowMs;
            return true;
        }
        return false;
    }
    reset() {
        this.lastSentMs = -Infinity;
    }
}
exports.CursorStreamPolicy = CursorStreamPolicy;
// Canvas pixels -> arena meters, using the bounds from trial_started.
function canvasToArena(px, py, canvasW, canvasH, arena) {
    const [aw, ah] = arena;
    const x = Math.min(Math.max((px / canvasW) * aw, 0), aw);
    // canvas y grows downward, arena y grows forward/up
    const y = Math.min(Math.max((1 - py / canvasH) * ah, 0), ah);
    return [x, y];
}
function arenaToCanvas(ax, ay, canvasW, canvasH, arena) {
    const [aw, ah] = arena;
    return [(ax / aw) * canvasW, (1 - ay / ah) * canvasH];
}
