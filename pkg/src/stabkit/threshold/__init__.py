from .noise import NoiseModel
from .protocol import FTProtocol, ExRec, build_protocol, classify_exrecs, sample_protocol_circuit
from .montecarlo import MonteCarloReport, simulate_exrec, simulate_protocol, wilson_interval
from .counting import count_fault_sets, max_fault_sets, malignant_count, single_fault_failures, MalignantCount
from .analytic import level_reduction_bound, levels_needed, overhead_bound, overhead_estimate, threshold_from_A
from .fit import fit_quadratic, is_monotone, crossing, pseudo_threshold, parse_grid, PseudoThreshold
