"""Contour machinery for the one-dimensional long-range Ising model.

Couplings J(r) = r^-alpha with 1 < alpha <= 2.  The package provides the
dual-lattice bookkeeping (spin flips at half-integers), certified
Hamiltonians, multiscale covers and their isolated subfamilies,
(M,a)-contour partitions, the contour-counting census, the constant pack
behind the Peierls bound, decaying-field stability certificates, sweep
verification of every inequality the constants rest on, and a Metropolis
chain cross-checked against exact summation on small windows.
"""

from .bounds import (PeierlsConstants, beta_threshold, c_of, cover_constant,
                     energy_bracket, peierls_constants, peierls_series, zeta)
from .contours import (ContourPartition, PartitionView,
                       check_partition_properties, externals, gap_sign,
                       is_irreducible, is_well_ordered, negative_set,
                       nests_inside, partition, partition_view, positive_part,
                       union_flips, volume_set)
from .covers import (ContourParams, CoverFamily, OpenInterval,
                     canonical_cover, cover_family, cover_size,
                     isolated_cover, isolated_cover_size,
                     isolation_threshold, nbar, scale_chain_stats, scale_map,
                     scale_preimage_bound, scale_preimage_census, top_scale)
from .energy import (CertifiedValue, FieldProfile, ModelParams, WindowEnergy,
                     boundary_field, coupling, dn, epsilon_j, field_energy,
                     field_energy_of_sites, hamiltonian,
                     hamiltonian_by_parity, perturbed_hamiltonian, tail_sum)
from .enumeration import (C2, CensusRow, census, census_is_within_bound,
                          dual_points, enumerate_flip_sets, log_length,
                          translation_classes)
from .errors import (CertificationError, EmptyContourError, FixpointError,
                     ResourceLimitError)
from .fields import (StabilityCertificate, bubble_energy, bubble_energy_scan,
                     bubble_lower_bound, critical_amplitude,
                     field_upper_bound, max_field_energy,
                     max_field_energy_scan, stability_certificate,
                     subcritical_radius, ybar)
from .lattice import (Configuration, HalfInteger, IntervalZ, SpinFlipSet,
                      boundary, configuration, diam, dist, dist_twice,
                      interiors, minus_sites_of)
from .montecarlo import ChainResult, ChainSpec, exact_expectation, run_chain
from .verify import (CorpusSpec, VerificationReport, ratio_tail_check,
                     sweep_cover_relation, sweep_energy_estimate,
                     sweep_field_difference, sweep_geometric_estimate,
                     sweep_interval_disjointness)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
