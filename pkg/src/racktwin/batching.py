"""GPU-instancing batch planner and draw statistics.

Items sharing a (mesh_id, template_id) pair collapse into one batch, the
same-mesh/same-material rule real instanced rendering imposes. The stats
side reports the naive baseline (every item draws on its own, as a scene
with one unique material per node would) against the planned batches,
with the ratio between them.

Because engines cap how many instances one submission may carry, the
planner also reports a chunked submission count: batch instance counts
split under the cap. Both totals (batches and submissions) appear in the
report since either can be read as "the number of draws".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .scene.items import RenderItem, Transform
from .scene.templates import (
    DEFAULT_MESH_TRIANGLES,
    InstanceProps,
    MaterialTemplate,
    TemplateError,
)

DEFAULT_MAX_INSTANCES_PER_DRAW = 1023


class BatchError(ValueError):
    """Scene handed to the planner is malformed (e.g. duplicate item ids)."""


class MeshError(KeyError):
    """A batch references a mesh the library does not know."""


@dataclass(frozen=True)
class MeshLibrary:
    """Triangle counts per mesh id."""

    triangles: Mapping[str, int]

    def validate(self) -> None:
        for mesh_id, count in self.triangles.items():
            if count <= 0:
                raise ValueError(f"mesh {mesh_id!r} has non-positive triangle count {count}")

    def triangles_of(self, mesh_id: str) -> int:
        try:
            return self.triangles[mesh_id]
        except KeyError:
            raise MeshError(f"mesh {mesh_id!r} is not in the mesh library") from None


DEFAULT_MESH_LIBRARY = MeshLibrary(DEFAULT_MESH_TRIANGLES)


@dataclass(frozen=True)
class Batch:
    """All instances drawn with one mesh and one material template."""

    mesh_id: str
    template_id: str
    instances: tuple[tuple[str, InstanceProps, Transform], ...]

    @property
    def instance_count(self) -> int:
        return len(self.instances)


@dataclass(frozen=True)
class SceneStats:
    """Draw counters for one frame.

    potential_draw_calls is the render-item count: what the frame would
    cost if nothing batched. draw_submissions is the chunked instanced
    count under the per-draw instance cap.
    """

    batch_count: int
    potential_draw_calls: int
    triangle_count: int
    draw_submissions: int
    clamp_count: int = 0
    error_count: int = 0

    def validate(self) -> None:
        if self.batch_count > self.potential_draw_calls:
            raise ValueError(
                f"batch_count {self.batch_count} exceeds potential draw calls "
                f"{self.potential_draw_calls}"
            )


def plan_batches(items: Sequence[RenderItem]) -> list[Batch]:
    """Group items into instancing batches.

    Batches come out ordered by (mesh_id, template_id); instances within a
    batch by item_id. Duplicate item ids are rejected.
    """
    groups: dict[tuple[str, str], list[RenderItem]] = {}
    seen: set[str] = set()
    for item in items:
        if item.item_id in seen:
            raise BatchError(f"duplicate item_id {item.item_id!r}")
        seen.add(item.item_id)
        groups.setdefault((item.mesh_id, item.template_id), []).append(item)

    batches: list[Batch] = []
    for (mesh_id, template_id) in sorted(groups):
        members = sorted(groups[(mesh_id, template_id)], key=lambda i: i.item_id)
        batches.append(
            Batch(
                mesh_id=mesh_id,
                template_id=template_id,
                instances=tuple((i.item_id, i.instance, i.transform) for i in members),
            )
        )
    return batches


def _chunks(count: int, cap: int) -> int:
    return (count + cap - 1) // cap if count else 0


def naive_stats(
    items: Sequence[RenderItem],
    mesh_library: MeshLibrary = DEFAULT_MESH_LIBRARY,
) -> SceneStats:
    """Baseline stats with every item drawn individually."""
    triangles = sum(mesh_library.triangles_of(item.mesh_id) for item in items)
    return SceneStats(
        batch_count=len(items),
        potential_draw_calls=len(items),
        triangle_count=triangles,
        draw_submissions=len(items),
    )


def scene_stats(
    batches: Sequence[Batch],
    mesh_library: MeshLibrary = DEFAULT_MESH_LIBRARY,
    max_instances_per_draw: int = DEFAULT_MAX_INSTANCES_PER_DRAW,
    clamp_count: int = 0,
    error_count: int = 0,
) -> SceneStats:
    """Stats for planned batches; triangle totals are exact sums."""
    triangles = 0
    instances = 0
    submissions = 0
    for batch in batches:
        triangles += mesh_library.triangles_of(batch.mesh_id) * batch.instance_count
        instances += batch.instance_count
        submissions += _chunks(batch.instance_count, max_instances_per_draw)
    stats = SceneStats(
        batch_count=len(batches),
        potential_draw_calls=instances,
        triangle_count=triangles,
        draw_submissions=submissions,
        clamp_count=clamp_count,
        error_count=error_count,
    )
    stats.validate()
    return stats


def validate_batch_legality(
    batch_items: Sequence[RenderItem],
    registry: Mapping[str, MaterialTemplate],
) -> list[str]:
    """Violation report for one claimed batch; empty means legal.

    Planner output is legal by construction; this guards hand-built
    batches and registry corruption. Each violation names the offending
    item pair and the parameter that differs.
    """
    violations: list[str] = []
    if not batch_items:
        return violations
    first = batch_items[0]
    for other in batch_items[1:]:
        if other.mesh_id != first.mesh_id:
            violations.append(
                f"{first.item_id} vs {other.item_id}: mesh_id differs "
                f"({first.mesh_id!r} vs {other.mesh_id!r})"
            )
        if other.template_id != first.template_id:
            violations.append(
                f"{first.item_id} vs {other.item_id}: template_id differs "
                f"({first.template_id!r} vs {other.template_id!r})"
            )

    used = sorted({item.template_id for item in batch_items})
    resolved: list[MaterialTemplate] = []
    for template_id in used:
        template = registry.get(template_id)
        if template is None:
            violations.append(f"template {template_id!r} is not in the registry")
            continue
        try:
            template.validate()
        except TemplateError as exc:
            violations.append(f"template {template_id!r} is corrupt: {exc}")
            continue
        resolved.append(template)

    # two templates under one batch always differ somewhere; name the field
    if len(resolved) > 1:
        base = resolved[0]
        for other in resolved[1:]:
            for name in (
                "shader_kind",
                "stop0",
                "stop1",
                "base_texture_id",
                "min_w",
                "max_w",
                "normalized_large",
                "outline_color",
                "thickness",
                "expand",
            ):
                if getattr(base, name) != getattr(other, name):
                    violations.append(
                        f"per-material parameter {name!r} differs between "
                        f"{base.template_id!r} and {other.template_id!r}"
                    )
    return violations


def validate_batches(
    batches: Sequence[Batch],
    items: Sequence[RenderItem],
    registry: Mapping[str, MaterialTemplate],
) -> list[str]:
    """Check planner output covers the items exactly, plus per-batch legality."""
    violations: list[str] = []
    by_id = {item.item_id: item for item in items}
    seen: set[str] = set()
    for batch in batches:
        members = []
        for item_id, instance, transform in batch.instances:
            if item_id in seen:
                violations.append(f"item {item_id!r} appears in more than one batch")
            seen.add(item_id)
            source = by_id.get(item_id)
            if source is None:
                violations.append(f"batch carries unknown item {item_id!r}")
                continue
            if source.mesh_id != batch.mesh_id or source.template_id != batch.template_id:
                violations.append(
                    f"item {item_id!r} assigned to batch "
                    f"({batch.mesh_id!r}, {batch.template_id!r}) but declares "
                    f"({source.mesh_id!r}, {source.template_id!r})"
                )
            members.append(source)
        violations.extend(validate_batch_legality(members, registry))
    missing = by_id.keys() - seen
    for item_id in sorted(missing):
        violations.append(f"item {item_id!r} missing from every batch")
    return violations


_REPORT_ROWS = ("Batches", "Triangles", "Potential draw calls")


def _row_values(name: str, naive: SceneStats, instanced: SceneStats) -> tuple[int, int]:
    if name == "Batches":
        return naive.batch_count, instanced.batch_count
    if name == "Triangles":
        return naive.triangle_count, instanced.triangle_count
    return naive.potential_draw_calls, instanced.potential_draw_calls


def stats_report(naive: SceneStats, instanced: SceneStats) -> str:
    """Plain-text naive/instanced/multiplier table plus submission footer."""
    lines = ["BATCH AND TRIANGLE COUNTS PER FRAME"]
    header = f"{'':<22}{'naive':>12}{'instanced':>12}{'multiplier':>12}"
    lines.append(header)
    for name in _REPORT_ROWS:
        base, opt = _row_values(name, naive, instanced)
        multiplier = opt / base if base else 0.0
        lines.append(f"{name:<22}{base:>12}{opt:>12}{'x%.2f' % multiplier:>12}")
    lines.append(
        f"Instanced submissions (cap {DEFAULT_MAX_INSTANCES_PER_DRAW}): "
        f"{instanced.draw_submissions}"
    )
    return "\n".join(lines) + "\n"


def stats_json_lines(naive: SceneStats, instanced: SceneStats) -> str:
    """Machine-readable variant of stats_report, one JSON object per row."""
    rows = []
    for name in _REPORT_ROWS:
        base, opt = _row_values(name, naive, instanced)
        rows.append(
            {
                "metric": name.lower().replace(" ", "_"),
                "naive": base,
                "instanced": opt,
                "multiplier": round(opt / base, 4) if base else 0.0,
            }
        )
    rows.append(
        {
            "metric": "draw_submissions",
            "naive": naive.draw_submissions,
            "instanced": instanced.draw_submissions,
            "multiplier": (
                round(instanced.draw_submissions / naive.draw_submissions, 4)
                if naive.draw_submissions
                else 0.0
            ),
        }
    )
    return "\n".join(json.dumps(row) for row in rows) + "\n"
