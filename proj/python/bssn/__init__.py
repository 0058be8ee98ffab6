"""Semismooth Newton solver for bilinear control of a semilinear elliptic problem.

    import bssn
    cfg = bssn.benchmark_config(levels=[5])
    result = bssn.solve(cfg, 5)
    result["J"], result["u"].shape

The C++ core does the work; this package re-exports its entry points.
"""

from ._bssn import (
    ConfigError,
    RunConfig,
    SolverError,
    cli,
    mesh_info,
    mesh_nodes,
    parse_config,
    parse_config_text,
    run,
    solve,
    verify,
)

__all__ = [
    "ConfigError",
    "RunConfig",
    "SolverError",
    "benchmark_config",
    "cli",
    "mesh_info",
    "mesh_nodes",
    "parse_config",
    "parse_config_text",
    "run",
    "solve",
    "verify",
]

__version__ = "0.1.0"


def benchmark_config(levels=(7,), tracking="quadratic", output_directory="bssn_output"):
    """Config for the reference instance, as if read from a minimal config file."""
    text = (
        "[problem]\n"
        f"kind = benchmark\ntracking = {tracking}\n"
        "[mesh]\n"
        f"levels = {', '.join(str(int(level)) for level in levels)}\n"
    )
    cfg = parse_config_text(text, "<benchmark>")
    cfg.output_directory = str(output_directory)
    return cfg


def main(argv=None):
    """`python -m bssn run|verify|mesh-info ...`"""
    import sys

    return cli(list(sys.argv[1:] if argv is None else argv))
