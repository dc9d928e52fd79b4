"""Debugging workbench for configurable programs.

Identifies influencing options, locates option hotspots, and traces
cause-effect chains for programs written in the MiniConf toy language.
"""

__version__ = "0.1.0"
