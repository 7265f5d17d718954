"""HTTP/WebSocket surface of the twin.

/live streams frame packets (full scene on subscribe, deltas after);
the remaining endpoints are plain request/response queries against the
pipeline's latest state and its history.
"""

from __future__ import annotations

import asyncio
import contextlib
import itertools
import logging
from typing import Any, Iterator, Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel

from ..history import FocusQuery, RangeError
from ..model import SnapshotFrame
from . import wire
from .pipeline import TwinPipeline


class Broadcaster:
    """Fan-out of encoded packets to live subscribers."""

    def __init__(self) -> None:
        self._queues: list[asyncio.Queue[str]] = []

    def subscribe(self) -> "asyncio.Queue[str]":
        queue: asyncio.Queue[str] = asyncio.Queue()
        self._queues.append(queue)
        return queue

    def unsubscribe(self, queue: "asyncio.Queue[str]") -> None:
        if queue in self._queues:
            self._queues.remove(queue)

    def publish(self, text: str) -> None:
        for queue in self._queues:
            queue.put_nowait(text)

    @property
    def subscriber_count(self) -> int:
        return len(self._queues)


class FocusRequest(BaseModel):
    node_glob: Optional[str] = None
    user: Optional[str] = None
    job_id: Optional[str] = None
    alert: Optional[str] = None


def create_app(
    pipeline: TwinPipeline,
    source: Optional[Iterator[SnapshotFrame]] = None,
    interval_s: Optional[float] = None,
    tick_limit: Optional[int] = None,
) -> FastAPI:
    """Build the service app around a pipeline.

    With a source, a background task steps the pipeline at the configured
    cadence and broadcasts each tick's packet; without one, the caller
    drives pipeline.step and the query endpoints serve whatever state the
    pipeline holds (how the tests exercise it).
    """
    broadcaster = Broadcaster()
    tick_s = interval_s if interval_s is not None else pipeline.spec.simulator.interval_ms / 1000.0

    log = logging.getLogger("racktwin.service")

    async def run_source() -> None:
        frames = source if tick_limit is None else itertools.islice(source, tick_limit)
        try:
            for frame in frames:
                packet = pipeline.step(frame)
                broadcaster.publish(wire.encode_packet(packet))
                await asyncio.sleep(tick_s)
        except Exception:
            log.exception("frame source stopped")
            raise

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(run_source()) if source is not None else None
        try:
            yield
        finally:
            if task is not None:
                task.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await task

    app = FastAPI(title="racktwin", lifespan=lifespan)
    app.state.pipeline = pipeline
    app.state.broadcaster = broadcaster

    def latest_or_503() -> SnapshotFrame:
        frame = pipeline.latest_frame
        if frame is None:
            raise HTTPException(status_code=503, detail="no frame ingested yet")
        return frame

    @app.get("/nodes")
    def get_nodes() -> dict[str, Any]:
        frame = latest_or_503()
        return {"timestamp": frame.timestamp, "nodes": frame.node_names()}

    @app.get("/nodes/{name}")
    def get_node(name: str) -> dict[str, Any]:
        frame = latest_or_503()
        node = frame.nodes.get(name)
        if node is None:
            raise HTTPException(status_code=404, detail=f"unknown node: {name}")
        return {"timestamp": frame.timestamp, "node": wire.node_to_wire(node)}

    @app.get("/frames")
    def get_frames(t0: int, t1: int) -> dict[str, Any]:
        if t0 > t1:
            raise HTTPException(status_code=400, detail=f"t0 {t0} is after t1 {t1}")
        frames = pipeline.history.range(t0, t1)
        return {"frames": [pipeline.packet_at(f.timestamp) for f in frames]}

    @app.get("/alerts")
    def get_alerts() -> dict[str, Any]:
        frame = latest_or_503()
        return {
            "timestamp": frame.timestamp,
            "alerts": [wire.alert_to_wire(a) for a in pipeline.latest_alerts],
        }

    @app.get("/stats")
    def get_stats() -> dict[str, Any]:
        frame = latest_or_503()
        stats = pipeline.latest_stats
        stats["timestamp"] = frame.timestamp
        stats["report"] = pipeline.latest_report
        return stats

    @app.get("/scene")
    def get_scene(t: Optional[int] = None) -> dict[str, Any]:
        if t is None:
            latest_or_503()
            return pipeline.snapshot_packet()
        try:
            return pipeline.packet_at(t)
        except RangeError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.post("/focus")
    def post_focus(request: FocusRequest) -> dict[str, Any]:
        frame = latest_or_503()
        query = FocusQuery(
            node_glob=request.node_glob,
            user=request.user,
            job_id=request.job_id,
            alert=request.alert,
        )
        try:
            query.validate()
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {"timestamp": frame.timestamp, "nodes": pipeline.focus_nodes(query)}

    @app.websocket("/live")
    async def live(ws: WebSocket) -> None:
        await ws.accept()
        while pipeline.latest_frame is None:
            await asyncio.sleep(0.01)
        # Subscribe before snapshotting so no tick falls in the gap; a
        # delta that duplicates the snapshot's tick applies as a no-op.
        queue = broadcaster.subscribe()
        try:
            await ws.send_text(wire.encode_packet(pipeline.snapshot_packet()))
            while True:
                await ws.send_text(await queue.get())
        except WebSocketDisconnect:
            pass
        finally:
            broadcaster.unsubscribe(queue)

    return app
