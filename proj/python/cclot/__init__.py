"""Chance-constrained lot sizing toolkit."""

try:
    from ._cclot import (
        Instance,
        brute_force_optimum,
        chance_feasible,
        from_json,
        generate,
        load_instance,
        save_instance,
        solve,
    )
except ImportError:  # in-tree runs: the module sits on PYTHONPATH directly
    from _cclot import (
        Instance,
        brute_force_optimum,
        chance_feasible,
        from_json,
        generate,
        load_instance,
        save_instance,
        solve,
    )

__all__ = [
    "Instance",
    "brute_force_optimum",
    "chance_feasible",
    "from_json",
    "generate",
    "load_instance",
    "save_instance",
    "solve",
]
