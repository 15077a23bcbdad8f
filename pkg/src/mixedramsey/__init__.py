"""Mixed-parity cycle Ramsey toolkit: colourings, certificates and searches."""

from .cyclefind import CycleCertificate, PathCertificate, find_cycle_exact, find_path_exact
from .decompose import Decomposition, decompose, verify_decomposition
from .errors import (
    BudgetExceeded,
    EdgeBoundViolation,
    GraphFormatError,
    ParameterError,
    ParityError,
    PreconditionError,
    RamseyToolkitError,
    SizeCapError,
    VerificationFailed,
)
from .extremal import LowerBoundSpec, build_construction_1, build_construction_2, gen_H, gen_K, gen_Kstar
from .graphcore import BLUE, GREEN, RED, Colour, MultiColouredGraph, read_graph, write_graph
from .matchfind import ConnectedMatching, max_connected_matching, maximum_matching
from .ramsey import (
    CycleTriple,
    SearchOutcome,
    certify_lower_bound,
    even_floor,
    odd_floor,
    search_ramsey,
    theorem_A_value,
    theorem_C_value,
)
from .regularity import ClusterPartition, ReducedGraph, blow_up_cycle, build_reduced_graph, check_regular_pair
from .stability import StructureWitness, detect_structure, verify_witness

__version__ = "0.1.0"
