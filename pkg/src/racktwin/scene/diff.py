"""Minimal per-frame property updates between two scenes.

A diff only carries per-instance property changes. Anything structural
(items appearing or vanishing, mesh/template/transform changes) cannot be
expressed as a property update and raises StructuralChangeError, which
consumers answer with a full scene rebuild.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .items import RenderItem
from .templates import PROP_FIELDS


class StructuralChangeError(ValueError):
    """The two scenes differ in structure, not just instance properties."""


class DiffError(ValueError):
    """An update references an unknown item or property."""


@dataclass(frozen=True)
class RenderPropertyUpdate:
    """One item's changed per-instance properties for one frame."""

    item_id: str
    material_slot: int
    props: Mapping[str, float]

    def validate(self) -> None:
        if not self.props:
            raise DiffError(f"update for {self.item_id!r} carries no properties")
        for key in self.props:
            if key not in PROP_FIELDS:
                raise DiffError(f"unknown instance property {key!r}")


def diff_updates(
    prev_items: Sequence[RenderItem],
    new_items: Sequence[RenderItem],
) -> list[RenderPropertyUpdate]:
    """Updates that transform prev_items into new_items, sorted by item id.

    Identical scenes produce an empty list. Scenes that differ in item-id
    sets, meshes, templates, or transforms raise StructuralChangeError.
    """
    prev_by_id = {item.item_id: item for item in prev_items}
    new_by_id = {item.item_id: item for item in new_items}
    if len(prev_by_id) != len(prev_items) or len(new_by_id) != len(new_items):
        raise DiffError("duplicate item_id in scene")
    if prev_by_id.keys() != new_by_id.keys():
        added = sorted(new_by_id.keys() - prev_by_id.keys())[:3]
        removed = sorted(prev_by_id.keys() - new_by_id.keys())[:3]
        raise StructuralChangeError(
            f"item-id sets differ (added {added}, removed {removed})"
        )

    updates: list[RenderPropertyUpdate] = []
    for item_id in sorted(new_by_id):
        old = prev_by_id[item_id]
        new = new_by_id[item_id]
        if old == new:
            continue
        if (
            old.mesh_id != new.mesh_id
            or old.template_id != new.template_id
            or old.transform != new.transform
        ):
            raise StructuralChangeError(
                f"item {item_id!r} changed mesh, template, or transform"
            )
        changed = {
            name: getattr(new.instance, name)
            for name in PROP_FIELDS
            if getattr(old.instance, name) != getattr(new.instance, name)
        }
        updates.append(RenderPropertyUpdate(item_id=item_id, material_slot=0, props=changed))
    return updates


def apply_updates(
    items: Sequence[RenderItem],
    updates: Iterable[RenderPropertyUpdate],
) -> list[RenderItem]:
    """A new item list with the updates applied; original is untouched."""
    by_id = {item.item_id: item for item in items}
    for update in updates:
        update.validate()
        target = by_id.get(update.item_id)
        if target is None:
            raise DiffError(f"update references unknown item {update.item_id!r}")
        by_id[update.item_id] = replace(
            target, instance=replace(target.instance, **dict(update.props))
        )
    return [by_id[item.item_id] for item in items]
