"""Numerical laboratory for the dispersive Hunter-Saxton equation
u_t + u u_x + u_xxx = (1/2) dx^{-1}(u_x^2) on a large torus.

The package is organized around one substrate and a stack of
experiments on it:

* :mod:`dhslab.grid` — periodic grid, spectral fields, multipliers;
* :mod:`dhslab.lp` — Littlewood-Paley projectors, paraproducts,
  commutators, and the high-pass fractional derivative A;
* :mod:`dhslab.energy` — conserved quantities, the normal-form variable,
  the modified energy and its quartic rate;
* :mod:`dhslab.stepper` — exact Airy propagator, ETDRK4/IMEX evolutions
  (nonlinear, variable-coefficient linear, linearized);
* :mod:`dhslab.schemes` — Picard iteration, Lipschitz measurements,
  low-frequency characteristics, growth audits;
* :mod:`dhslab.envelope` — sharp frequency envelopes and the
  regularized-data convergence study;
* :mod:`dhslab.cli` — the ``dhs`` command line driving all of the above.
"""

from .energy import (
    EnergyReport,
    e1,
    e2_gauge,
    equivalence_defect,
    high_freq_energy,
    modified_energy,
    modified_energy_rate,
    normal_form_variable,
    q_split,
    xs_norm,
)
from .envelope import (
    Envelope,
    c_geq,
    convergence_study,
    regularize,
    sharp_envelope,
)
from .grid import (
    Grid,
    SpectralField,
    antiderivative_meanzero,
    dealias,
    derivative,
    inner,
    load_field,
    make_field,
    norm,
    product,
    resample,
    save_field,
)
from .lp import (
    L_A,
    LPSymbol,
    apply_A,
    balanced_product,
    commutator_A_para,
    paraproduct_low_high,
    project,
    smooth_cutoff,
)
from .schemes import (
    IterationReport,
    difference_experiment,
    linfty_bound_audit,
    low_freq_flow,
    picard_map,
    picard_solve,
)
from .stepper import (
    FieldPath,
    LinearCoeffs,
    SolverConfig,
    TimeSeries,
    airy_propagate,
    evolve,
    evolve_linear,
    evolve_linearized,
    nonlinearity,
)

__version__ = "0.1.0"
