"""Dispersion, resonance and vacuum-field quantities for neutral atoms.

Natural units throughout (hbar = c = k_B = 1, lengths in Bohr radii unless
stated otherwise). See the README for an overview of the modules.
"""

from .boundary import atom_wall, pair_near_plate, pair_near_plate_via_correlation
from .core import (
    ATOMIC,
    NATURAL,
    SI,
    EnergyResult,
    ImageGeometry,
    Regime,
    TriangleGeometry,
    UnitSystem,
    convert_units,
    image_geometry,
    make_triangle,
)
from .exceptions import (
    ConsistencyError,
    ConvergenceError,
    DegenerateGeometryError,
    DifferentiationError,
    DispersionError,
    DomainError,
    NumericalError,
)
from .field_kernels import (
    DiffSpec,
    apply_f_chain,
    apply_f_chain_radial,
    g_tensor,
    plate_polarization_sum,
    v_tensor,
    vacuum_e_correlation,
)
from .noninertial import (
    AcceleratedPair,
    ScalarAtomPair,
    resonance_accelerated,
    rindler_event,
    scalar_cp_accelerated,
    unruh_temperature,
)
from .polarizability import (
    PolarizabilityModel,
    Transition,
    TwoLevelAtom,
    alpha_excited_two_level,
    alpha_imag,
    alpha_real,
    load_atom,
    model_from_dict,
    two_level_model,
)
from .quadrature import QuadratureSpec, integrate_exp_weighted, integrate_semi_infinite
from .resonance import BellPairSpec, resonance_energy
from .three_body import (
    TripleSpec,
    three_body_equilateral_far,
    three_body_excited,
    three_body_far,
    three_body_full,
)
from .two_body import (
    PairSpec,
    classify_regime,
    cp_far,
    cp_far_electric_magnetic,
    cp_full,
    cp_via_correlation,
    london_near,
)
from .vacuum_density import density_around_atom, density_profile, density_route_energy, plate_density

__version__ = "0.1.0"
