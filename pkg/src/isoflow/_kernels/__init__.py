"""Flow-kernel backend selection.

The compiled Cython kernel is preferred; the pure-numpy fallback keeps the
package functional from a plain source checkout. Both expose the same
rk4_advance contract, and benchmarks/bench_flow.py compares them.
"""

try:
    from ._flow_cy import BACKEND, rk4_advance  # noqa: F401
except ImportError:  # pragma: no cover - depends on build environment
    from ._flow_py import BACKEND, rk4_advance  # noqa: F401
