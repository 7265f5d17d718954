"""Desk-scale digital twin of a GPU cluster.

Ingests (or synthesizes) node/GPU telemetry, encodes it into a 3D scene
with instancing-friendly shader semantics, plans draw-call batches, keeps
history, and streams live frames to operator clients.
"""

__version__ = "0.1.0"
