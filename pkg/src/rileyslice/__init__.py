"""Word polynomials, polynomial-semigroup dynamics and Riley slice tools."""

__version__ = "0.1.0"

from .algebra import IntPolynomial, LaurentPolynomial, SymbolicMatrix2, gamma_of, poly_compose, poly_iterate
from .dynamics import (
    Cycle,
    Orbit,
    PointCloud,
    PolynomialSystem,
    Raster,
    RootFindingError,
    backward_orbit,
    escape_raster,
    hausdorff,
    iterate,
    periodic_points,
    preimages,
    roots,
)
from .riley import (
    FIGURE_EIGHT,
    LANDMARKS,
    batch_audit,
    certify_region,
    density_trend,
    landmark,
    nielsen_witness,
    nonfree_certificate,
    root_location_audit,
    sl_screen,
    supergroup_witness,
    verify_witness,
)
from .table1 import REFERENCE_TABLE, check_table1
from .words import (
    FreeWord,
    enumerate_words,
    exponents_of,
    good_word,
    parse_word,
    principal_character,
    psi_involution,
    reduce,
    star,
    star_power,
    word_matrix,
    word_polynomial,
    z2_extend,
)
