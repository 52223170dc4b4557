"""conekit: exact stabilizer toolkit for finite toric-code patches.

Six building blocks: lattice geometry, signed Pauli strings, the ground
state as a stabilizer group, superselection sectors with braiding data,
the crossed-product index certificates, and a CLI that runs the whole
verification battery.
"""

from .anyons import (
    CHARGE_E,
    CHARGE_EPS,
    CHARGE_M,
    SECTOR_ORDER,
    VACUUM,
    SectorLabel,
    Transporter,
    apply_endomorphism,
    charge_endomorphism,
    conjugate_sector,
    enumerate_sectors,
    fuse,
    is_degenerate,
    monodromy,
    s_matrix,
    sector_census_layout,
    sector_of_state,
    standard_cone_pair,
    statistical_dimension,
    transporter_truncation,
    transporter_vacuum_identity,
)
from .errors import (
    AmbiguousChargeError,
    ConekitError,
    ConsistencyError,
    DimensionMismatchError,
    EmptyRegionError,
    GeometryError,
    InvalidActionError,
    InvalidSizeError,
    LocalizationError,
    NoRoomError,
)
from .geometry import (
    Bond,
    ConeDescriptor,
    DetectionLoop,
    Patch,
    Path,
    Region,
    bond_count,
    box_region,
    build_patch,
    cone_region,
    detection_loop,
    find_path,
)
from .index import (
    CrossedProductElement,
    GroupAction,
    WordAlgebra,
    canonical_expectation,
    cp_adjoint,
    cp_generator,
    cp_multiply,
    cp_unit,
    expectation_dominates,
    phi_injectivity_check,
    phi_map,
    pimsner_popa_constant,
    sector_expectation,
    select_cone_bonds,
    standard_action,
)
from .pauli import (
    PauliOperator,
    commutation_sign,
    multiply,
    path_operator,
    plaquette_operator,
    star_operator,
)
from .stabilizer import (
    ChargedState,
    StabilizerGroup,
    ground_stabilizers,
    overlap,
    states_equal,
    syndrome,
)

__version__ = "0.1.0"
