"""Headless scripted websocket client used by service and acceptance tests.

The client is the live counterpart of a synthetic agent: it never sees the
endpoint, only the feedback stream, and steers with the same policy classes
the simulator uses.
"""

import asyncio
import json

import aiohttp

from haptic_guide.agents import AgentKind, AgentModel, make_policy
from haptic_guide.encoding import MotorCommand, VoiceCue, VoiceWord


def feedback_to_obj(msg):
    if msg is None:
        return None
    if msg["type"] == "feedback":
        return MotorCommand(msg["m1"], msg["m2"], msg["m3"], msg["m4"])
    if msg["type"] == "voice":
        return VoiceCue(VoiceWord(msg["word"]), msg["freq_hz"])
    return None


async def run_live_trial(
    port,
    mode,
    seed,
    agent: AgentModel,
    enc_cfg,
    tick=0.01,
    participant="scripted",
    wall_limit=30.0,
    host="127.0.0.1",
):
    """Complete one trial against a running server; returns (messages, sent)."""
    messages = []
    sent = []
    loop = asyncio.get_running_loop()
    async with aiohttp.ClientSession() as http:
        async with http.ws_connect(f"ws://{host}:{port}/ws") as ws:

            async def recv(timeout):
                raw = await asyncio.wait_for(ws.receive(), timeout)
                data = json.loads(raw.data)
                messages.append(data)
                return data

            await ws.send_json({"type": "hello", "participant": participant, "seed": seed})
            hello = await recv(5.0)
            assert hello["type"] == "hello_ok", hello

            await ws.send_json({"type": "start_trial", "mode": mode})
            started = await recv(5.0)
            assert started["type"] == "trial_started", started

            w, h = started["arena"]
            x, y = w / 2.0, h / 2.0
            policy = make_policy(agent, enc_cfg, __import__("random").Random(0))
            pending_cue = None
            latest_cmd = None
            ended = None
            t0 = loop.time()

            while ended is None and loop.time() - t0 < wall_limit:
                while ended is None:
                    try:
                        data = await recv(0.001)
                    except asyncio.TimeoutError:
                        break
                    if data["type"] == "trial_ended":
                        ended = data
                    elif data["type"] == "voice":
                        pending_cue = feedback_to_obj(data)
                    elif data["type"] == "feedback":
                        latest_cmd = feedback_to_obj(data)
                if ended is not None:
                    break

                t = loop.time() - t0
                if agent.kind is AgentKind.VP_FOLLOWER:
                    fb = pending_cue
                    pending_cue = None  # a cue is consumed exactly once
                else:
                    fb = latest_cmd
                dx, dy = policy.step(t, tick, fb)
                x = min(max(x + dx, 0.0), w)
                y = min(max(y + dy, 0.0), h)
                msg = {"type": "cursor", "x": x, "y": y, "t_client": t}
                await ws.send_json(msg)
                sent.append(msg)
                await asyncio.sleep(tick)

            # drain anything outstanding (e.g. trial_ended racing the loop)
            while ended is None:
                try:
                    data = await recv(1.0)
                except asyncio.TimeoutError:
                    break
                if data["type"] == "trial_ended":
                    ended = data
    return messages, sent


def endpoint_leaked_before_end(messages, endpoint, tol=1e-9):
    """True if any pre-end message carries the endpoint coordinates."""

    def values(node):
        if isinstance(node, dict):
            for v in node.values():
                yield from values(v)
        elif isinstance(node, (list, tuple)):
            for v in node:
                yield from values(v)
        elif isinstance(node, (int, float)):
            yield float(node)

    ex, ey = endpoint
    for msg in messages:
        if msg["type"] == "trial_ended":
            return False
        vals = list(values(msg))
        for a in vals:
            for b in vals:
                if abs(a - ex) < tol and abs(b - ey) < tol and (ex, ey) != (0.0, 0.0):
                    return True
    return False
