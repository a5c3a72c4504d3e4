"use strict";
// Wire schema for the live-trial websocket. One compact JSON object per
// frame, discriminated by "type". The schema has no field that could carry
// the endpoint before trial_ended (reveal_endpoint only appears when the
// server runs with --reveal, which refuses logged sessions).
Object.defineProperty(exports, "__esModule", { value: true });
exports.MalformedPayload = void 0;
exports.parseServerMessage = parseServerMessage;
const VOICE_WORDS = ['forward', 'backward', 'left', 'right'];
const ALERT_FREQS = [0.4, 1.0, 2.0];
function isDuty(v) {
    return typeof v === 'number' && isFinite(v) && v >= 0 && v <= 1;
}
class MalformedPayload extends Error {
}
exports.MalformedPayload = MalformedPayload;
// Parse and validate one server frame; throws MalformedPayload so the UI
// can show the error banner and abort the trial.
function parseServerMessage(raw) {
    let data;
    try {
        data = JSON.parse(raw);
    }
    catch {
        throw new MalformedPayload('frame is not JSON');
    }
    if (typeof data !== 'object' || data === null || typeof data.type !== 'string') {
        throw new MalformedPayload('frame has no type');
    }
    switch (data.type) {
        case 'hello_ok':
            if (typeof data.session_id !== 'string')
                throw new MalformedPayload('bad hello_ok');
            return data;
        case 'trial_started':
            if (!Array.isArray(data.arena) || data.arena.length !== 2) {
                throw new MalformedPayload('trial_started needs arena [w, h]');
            }
            return data;
        case 'feedback':
            if (![data.m1, data.m2, data.m3, data.m4].every(isDuty)) {
                throw new MalformedPayload('feedback duties must be numbers in [0, 1]');
            }
            return data;
        case 'voice':
            if (!VOICE_WORDS.includes(data.word)) {
                throw new MalformedPayload(`unknown word ${data.word}`);
            }
            if (!ALERT_FREQS.includes(data.freq_hz)) {
                throw new MalformedPayload(`unknown alert frequency ${data.freq_hz}`);
            }
            return data;
        case 'trial_ended':
            if (typeof data.outcome !== 'object' || data.outcome === null) {
                throw new MalformedPayload('trial_ended needs an outcome');
            }
            return data;
        case 'error':
            return data;
        default:
            throw new MalformedPayload(`unknown message type ${data.type}`);
    }
}
