"""Collective early-time decay of driven cold-atom clouds.

Nonlinear coupled-dipole mean-field engine: Gaussian cloud sampling at a
prescribed peak optical depth, scalar-kernel coupling, adaptive drive/
decay integration, angular and global observables, and single-parameter
exponential rate extraction.  All quantities use Gamma = k_l = 1 units.
"""

__version__ = "0.1.0"

from .cloud import (Cloud, derive_cloud_seed, load_cloud_positions,
                    radius_from_b0, sample_gaussian_cloud, save_cloud_csv)
from .decay import (DecayFit, decay_rate_table, fit_series,
                    fit_single_exponential, normalize_to_switch_off,
                    write_fits_csv)
from .integrator import (Schedule, Trajectory, integrate_phase,
                         integrate_rk4_reference, run_drive_decay)
from .kernel import (AtomicState, CouplingMatrix, DriveParams, build_coupling,
                     local_field, rabi_from_saturation, rhs,
                     single_atom_steady_state)
from .observables import (Direction, ObservableSeries, SphereQuadrature,
                          canonical_direction, coherence_sum, cone_directions,
                          default_sphere_quadrature, detector_directions,
                          elastic_intensity, elastic_power,
                          excited_population, inelastic_power,
                          observable_series, pair_sum_rule, series_csv_text,
                          write_series_csv)
from .runner import (ExperimentConfig, ResultTable, angular_scan, load_config,
                     run_experiment, sweep_omega, write_config, write_results)

__all__ = [
    "AtomicState", "Cloud", "CouplingMatrix", "DecayFit", "Direction",
    "DriveParams", "ExperimentConfig", "ObservableSeries", "ResultTable",
    "Schedule", "SphereQuadrature", "Trajectory", "angular_scan",
    "build_coupling", "canonical_direction", "coherence_sum",
    "cone_directions", "decay_rate_table", "default_sphere_quadrature",
    "derive_cloud_seed", "detector_directions", "elastic_intensity",
    "elastic_power", "excited_population", "fit_series",
    "fit_single_exponential", "inelastic_power", "integrate_phase",
    "integrate_rk4_reference", "load_cloud_positions", "load_config",
    "local_field", "normalize_to_switch_off", "observable_series",
    "pair_sum_rule", "rabi_from_saturation", "radius_from_b0", "rhs",
    "run_drive_decay", "run_experiment", "sample_gaussian_cloud",
    "save_cloud_csv", "series_csv_text", "single_atom_steady_state",
    "sweep_omega", "write_config", "write_fits_csv", "write_results",
    "write_series_csv",
]
