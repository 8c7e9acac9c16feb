"""Quasitilings of amenable group actions: Python bindings."""

try:
    from ._qtiling import (  # type: ignore[attr-defined]
        InfeasibleError,
        InputError,
        SeparationError,
        box_size,
        choose_deltas,
        choose_r,
        choose_shape_indices,
        dump_eps_disjoint,
        dump_is_disjoint,
        dump_roundtrip,
        dump_tile_count,
        group_names,
        inv,
        invariance_defect,
        mul,
        render_svg,
        run_tile,
    )
except ImportError:  # development layout: extension next to the package
    from _qtiling import (  # type: ignore[no-redef]
        InfeasibleError,
        InputError,
        SeparationError,
        box_size,
        choose_deltas,
        choose_r,
        choose_shape_indices,
        dump_eps_disjoint,
        dump_is_disjoint,
        dump_roundtrip,
        dump_tile_count,
        group_names,
        inv,
        invariance_defect,
        mul,
        render_svg,
        run_tile,
    )

__all__ = [
    "InfeasibleError",
    "InputError",
    "SeparationError",
    "box_size",
    "choose_deltas",
    "choose_r",
    "choose_shape_indices",
    "dump_eps_disjoint",
    "dump_is_disjoint",
    "dump_roundtrip",
    "dump_tile_count",
    "group_names",
    "inv",
    "invariance_defect",
    "mul",
    "render_svg",
    "run_tile",
]
