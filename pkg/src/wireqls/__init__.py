"""Toolkit for wire-coupled two-trap quantum logic readout of electrons.

Modules
-------
constants     frozen CODATA 2018 snapshot, unit conventions
circuit       resonator impedance, series-mode equivalents, exchange budget
magnetics     bottle-ring on-axis field and gradients
spectroscopy  bottle shift, relativistic shift, broadening, heating estimate
dynamics      two-mode Lindblad exchange, swap fidelity
protocol      seven-step cycle state machine and Monte Carlo lineshapes
config        scenario schema and loaders
cli           command-line entry points
"""

from . import (  # noqa: F401
    circuit,
    config,
    constants,
    dynamics,
    magnetics,
    protocol,
    spectroscopy,
)

__version__ = "0.1.0"
