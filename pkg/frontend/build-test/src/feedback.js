"use strict";
// Pure mapping from feedback payloads to render/audio parameters.
// Browsers cannot drive vibration motors, so duty cycles become glyph
// opacity (and buzz loudness): opacity is affine in duty with slope 1 and
// intercept 0, i.e. a 0.5 duty renders at exactly 50% opacity.
Object.defineProperty(exports, "__esModule", { value: true });
exports.GLYPH_OFFSETS = void 0;
exports.glyphsForFeedback = glyphsForFeedback;
exports.buzzGainForFeedback = buzzGainForFeedback;
exports.voicePlan = voicePlan;
exports.clickSchedule = clickSchedule;
// Glyphs sit around the cursor: right of it, above (front), left, below.
exports.GLYPH_OFFSETS = {
    right: [1, 0],
    front: [0, -1], // canvas y grows downward; "front" renders above
    left: [-1, 0],
    back: [0, 1],
};
function glyphsForFeedback(fb) {
    const pairs = [
        ['right', fb.m1],
        ['front', fb.m2],
        ['left', fb.m3],
        ['back', fb.m4],
    ];
    return pairs
        .filter(([, duty]) => duty > 0)
        .map(([slot, duty]) => ({ slot, opacity: duty }));
}
// Loudness proxy for the vibration channel: the strongest motor wins.
function buzzGainForFeedback(fb) {
    return Math.max(fb.m1, fb.m2, fb.m3, fb.m4);
}
// One spoken word per message plus a click track at the alert rate.
function voicePlan(msg) {
    return {
        word: msg.word,
        clickIntervalMs: 1000 / msg.freq_hz,
    };
}
// Times (ms, from now) of metronome clicks over a horizon at the cue rate.
function clickSchedule(plan, horizonMs) {
    const out = [];
    for (let t = 0; t < horizonMs; t += plan.clickIntervalMs) {
        out.push(t);
    }
    return out;
}
