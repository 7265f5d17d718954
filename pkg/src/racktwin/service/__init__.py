"""Streaming service: frame pipeline, wire codec, HTTP/WebSocket app."""

from .app import Broadcaster, create_app
from .config import BIND_ENV, DEFAULT_HOST, DEFAULT_PORT, ServiceConfig, ServiceConfigError, resolve_bind
from .pipeline import TwinPipeline
from .sources import simulator_source, watch_directory
from .wire import (
    PACKET_DELTA,
    PACKET_FULL,
    WireError,
    decode_packet,
    delta_packet,
    encode_packet,
    full_packet,
    item_from_wire,
    item_to_wire,
    items_from_packet,
    node_to_wire,
    template_from_wire,
    template_to_wire,
    update_from_wire,
    update_to_wire,
    updates_from_packet,
)

__all__ = [
    "Broadcaster",
    "create_app",
    "BIND_ENV",
    "DEFAULT_HOST",
    "DEFAULT_PORT",
    "ServiceConfig",
    "ServiceConfigError",
    "resolve_bind",
    "TwinPipeline",
    "simulator_source",
    "watch_directory",
    "PACKET_DELTA",
    "PACKET_FULL",
    "WireError",
    "decode_packet",
    "delta_packet",
    "encode_packet",
    "full_packet",
    "item_from_wire",
    "item_to_wire",
    "items_from_packet",
    "node_to_wire",
    "template_from_wire",
    "template_to_wire",
    "update_from_wire",
    "update_to_wire",
    "updates_from_packet",
]
