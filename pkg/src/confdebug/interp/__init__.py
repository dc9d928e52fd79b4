from . import _kernel
from .profiler import (
    UNIT_SECONDS, ExecutionRecord, HotspotEntry, HotspotView, execute,
    hotspot_view, measure_campaign, validate_config,
)

#: "compiled" when the Cython-built kernel extension is loaded,
#: "pure" when the interpreted fallback is in use.
KERNEL_IMPL = "compiled" if _kernel.COMPILED else "pure"

__all__ = [
    "UNIT_SECONDS", "ExecutionRecord", "HotspotEntry", "HotspotView",
    "execute", "hotspot_view", "measure_campaign", "validate_config",
    "KERNEL_IMPL",
]
