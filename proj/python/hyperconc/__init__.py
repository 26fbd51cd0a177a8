"""Linear-optics simulator for N-photon hyperentanglement concentration.

The heavy lifting lives in the C++ extension ``hyperconc._core``; this
module parses its JSON reports into plain dicts.
"""

import json

from hyperconc._core import (
    device_tables_json,
    ppc_routing_json,
    run_exact_json,
    run_shots_json,
    success_formula,
    sweep,
    verify,
)

__all__ = [
    "success_formula",
    "run_exact",
    "run_shots",
    "sweep",
    "device_tables",
    "ppc_routing",
    "verify",
]


def run_exact(n, alpha2, delta2, detector="pnr", ppc="plain", variant="two_copies"):
    """Exhaustive branch enumeration; returns the run report as a dict."""
    return json.loads(run_exact_json(n, alpha2, delta2, detector, ppc, variant))


def run_shots(n, alpha2, delta2, shots, seed, detector="pnr", ppc="plain",
              variant="two_copies"):
    """Seeded Monte-Carlo sampling; returns the shot report as a dict."""
    return json.loads(run_shots_json(n, alpha2, delta2, shots, seed, detector, ppc, variant))


def device_tables(detector="pnr"):
    """Characteristic input/output tables of the four devices."""
    return json.loads(device_tables_json(detector))


def ppc_routing():
    """Routing of the PPC comparator stage for the four polarization products."""
    return json.loads(ppc_routing_json())
