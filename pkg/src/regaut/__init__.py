"""Exact local and global canonical heights for regular polynomial
automorphisms of affine N-space over Q.

Public surface, by layer:

* polynomials: MultiPoly, parse_poly, poly_to_text, homogenize, top_form
* maps: PolyMap, RegularAutomorphism, verify_inverse, regularity_check,
  iterate, algebraic_stability_degrees
* certificates: Certificate, build_certificate_n2, verify_certificate,
  place_constants, upper_bound_constant
* places: Place, point_lognorm, good_reduction_test, bad_place_set
* local theory: green, green_inverse, green_poly_map, classify_filtration,
  classify_escape
* global theory: weil_height, canonical_heights, functional_equation_check,
  growth_inequality_check, detect_periodic, orbit_counting
* files: load_map_file
"""

from .certificate import (
    Certificate,
    PlaceConstants,
    build_certificate_n2,
    place_constants,
    upper_bound_constant,
    verify_certificate,
    verify_certificate_for_maps,
)
from .errors import (
    InputError,
    NotRegularError,
    PolyParseError,
    RegautError,
    ResourceLimitError,
    UndecidedError,
)
from .globalheight import (
    Certified,
    HeightReport,
    OrbitCountRow,
    OrbitRecord,
    canonical_heights,
    detect_periodic,
    functional_equation_check,
    growth_inequality_check,
    growth_ratios,
    orbit_counting,
    support_places,
    weil_height,
)
from .localgreen import (
    EscapeClass,
    FiltrationClass,
    GreenValue,
    classify_escape,
    classify_filtration,
    drop_set_membership,
    green,
    green_inverse,
    green_poly_map,
    lower_bound_set_membership,
)
from .mapfile import LoadedMap, load_map_data, load_map_file
from .maps import (
    PolyMap,
    RegularAutomorphism,
    RegularityVerdict,
    algebraic_stability_degrees,
    apply_map,
    iterate,
    regularity_check,
    verify_inverse,
)
from .places import (
    BadPlaces,
    LogNorm,
    Place,
    ReductionReport,
    bad_place_set,
    good_reduction_test,
    parse_place,
    point_lognorm,
)
from .poly import (
    MultiPoly,
    homogenize,
    parse_poly,
    poly_compose,
    poly_eval,
    poly_to_text,
    top_form,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
