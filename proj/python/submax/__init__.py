"""Online Frank-Wolfe algorithms for monotone DR-submodular maximization."""

from ._core import (  # noqa: F401
    BlockPlan,
    ConfigError,
    ConstraintSet,
    InteriorSet,
    Matroid,
    MultilinearExtension,
    QuadraticDR,
    RegionBounds,
    Rng,
    SetObjective,
    ball_sample,
    bench,
    derive_params_bandit,
    derive_params_mono,
    impossibility_demo,
    lipschitz_smoothness_of_extension,
    list_families,
    pipage_round,
    random_coverage,
    random_facility_location,
    random_round,
    rho_schedule_bandit,
    rho_schedule_mono,
    run_experiment,
    shrink_interior,
    sphere_sample,
)

__version__ = getattr(__import__("submax._core", fromlist=["__version__"]), "__version__", "0.1.0")
