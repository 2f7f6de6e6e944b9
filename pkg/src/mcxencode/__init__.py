"""Probabilistic amplitude encoding via multi-controlled NOT gates.

Pipeline: quantize a real vector to a signed L-bit angle matrix, decompose
each column shift into few MCX gates via the subcube tree search, pick the
cheapest column order by solving a small TSP, assemble the encoder circuit,
and certify it against an exact statevector simulation.
"""

from .bitcore import (
    BinaryVector,
    all_control_strings,
    expand,
    fullness,
    is_complementary_cut,
    try_join,
)
from .circuit import (
    AngleSchedule,
    Circuit,
    CRy,
    HadamardLayer,
    MCX,
    PhaseFlip,
    XGate,
    build_core,
    build_full,
    depth,
    export_qasm,
    phi_angles,
)
from .decomposer import (
    CandidateSet,
    Decomposition,
    cost,
    decompose,
    find_next_control_strings,
    max_independent_set,
)
from .pathopt import (
    PathMatrix,
    Tour,
    build_path_matrix,
    deltas,
    edge_costs,
    identity_tour,
    solve_tsp,
)
from .preprocess import (
    EncodingMatrix,
    approx_sines,
    compute_angles,
    density_rho,
    quantize,
    quantized_success_probability,
    reconstruct,
)
from .simulator import (
    PostSelection,
    Statevector,
    apply_gate,
    fidelity,
    postselect_flag,
    run,
    uniform_superposition,
    verify_W,
)
from .bench import BenchRecord, InputSpec, generate, run_pipeline, sweep, to_csv

__version__ = "0.1.0"
