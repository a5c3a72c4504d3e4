"use strict";
// Websocket session wrapper: connect, handshake, message dispatch, and the
// idle -> active -> ended phase machine. The endpoint never enters client
// state; the only coordinates held are the participant's own cursor.
Object.defineProperty(exports, "__esModule", { value: true });
exports.LiveClient = void 0;
const protocol_1 = require("./protocol");
class LiveClient {
    callbacks;
    ws = null;
    phase = 'idle';
    trial = null;
    constructor(callbacks) {
        this.callbacks = callbacks;
    }
    connect(participant) {
        const proto = location.protocol === 'https:' ? 'wss' : 'ws';
        const ws = new WebSocket(`${proto}://${location.host}/ws`);
        this.ws = ws;
        ws.onopen = () => {
            ws.send(JSON.stringify({ type: 'hello', participant }));
        };
        ws.onmessage = (ev) => this.handleFrame(String(ev.data));
        ws.onclose = () => {
            this.setPhase('idle');
            this.callbacks.onBanner('connection lost');
        };
    }
    handleFrame(raw) {
        let msg;
        try {
            msg = (0, protocol_1.parseServerMessage)(raw);
        }
        catch (err) {
            if (err instanceof protocol_1.MalformedPayload) {
                this.callbacks.onBanner(`malformed payload: ${err.message}`);
                this.abort();
                return;
            }
            throw err;
        }
        if (msg.type === 'trial_started') {
            this.trial = msg;
            this.setPhase('active');
        }
        else if (msg.type === 'trial_ended') {
            this.setPhase('ended');
        }
        else if (msg.type === 'error') {
            this.callbacks.onBanner(`${msg.code}: ${msg.msg}`);
        }
        this.callbacks.onMessage(msg);
    }
    setPhase(phase) {
        this.phase = phase;
        this.callbacks.onPhase(phase);
    }
    startTrial(mode) {
        this.ws?.send(JSON.stringify({ type: 'start_trial', mode }));
    }
    sendCursor(x, y, tClient) {
        if (this.phase !== 'active')
            return; // streaming stops with the trial
        this.ws?.send(JSON.stringify({ type: 'cursor', x, y, t_client: tClient }));
    }
    abort() {
        this.ws?.send(JSON.stringify({ type: 'abort' }));
    }
}
exports.LiveClient = LiveClient;
