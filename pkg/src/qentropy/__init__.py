"""Integral representations of quantum relative entropy and entropy derivatives,
with data-processing and concavity-bound checks built on them."""

from .bounds import (
    chi_lower_bound_min,
    distinguishing_measurement,
    explicit_weaker_bound,
    kim_bound,
    mutual_info_binary,
    reduce_to_binary,
)
from .channels import (
    Compose,
    Kraus,
    Measurement,
    PartialTrace,
    Pinching,
    Transpose,
    apply_map,
    dpi_check,
    holevo_dpi_check,
    tr_monotonicity_check,
    validate_map,
)
from .entropy import EntropyValue, binary_entropy, holevo_chi, relative_entropy_spectral, von_neumann_entropy
from .integral import (
    IntegralForm,
    entropy_derivative_fd,
    entropy_derivative_integral,
    relative_entropy_integral,
)
from .linalg import eig_hermitian, random_density, support_contained, tr_signed, trace_norm
from .pencil import Form, Pencil, PositivityWindow
from .quadrature import QuadConfig, QuadResult, integrate

__version__ = "0.1.0"
