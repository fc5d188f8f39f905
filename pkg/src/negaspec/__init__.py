"""Negativity spectra and topological entanglement negativity of d = 2, 3, 4
toric codes under boundary Pauli decoherence."""

from __future__ import annotations

__version__ = "0.1.0"

from .cellcomplex import CellComplex, build_complex
from .chi import AdmissibleBasis, BoundaryConfig, chi, is_admissible
from .negativity import (
    NegativityReport,
    negativity,
    negativity_2d_x,
    negativity_2d_z,
    negativity_3d_x,
    negativity_3d_z,
    negativity_4d_z,
    scan,
)
from .spectrum import NegativitySpectrum, spectrum
from .stabilizer import NoiseModel, boundary_layout, build_toric_code, flat_cut_layout

__all__ = [
    "AdmissibleBasis",
    "BoundaryConfig",
    "CellComplex",
    "NegativityReport",
    "NegativitySpectrum",
    "NoiseModel",
    "boundary_layout",
    "build_complex",
    "build_toric_code",
    "chi",
    "flat_cut_layout",
    "is_admissible",
    "negativity",
    "negativity_2d_x",
    "negativity_2d_z",
    "negativity_3d_x",
    "negativity_3d_z",
    "negativity_4d_z",
    "scan",
    "spectrum",
]
