"""Turan numbers of linear even cycles in random hypergraphs, at desk scale."""
from .containers import (
    ContainerSet,
    IterationConfig,
    build_containers,
    exact_ex,
    iterate,
    one_step,
    union_bound_check,
)
from .constructions import (
    bertrand_prime,
    deletion_subgraph,
    girth5_certify,
    high_girth_blowup,
    star_subgraph,
    steiner_blowup,
    steiner_lines,
)
from .cycles import berge_girth, count_linear_cycles, enumerate_linear_cycles, is_cycle_free
from .errors import CapExceeded, InputError, NoProgress, UndefinedValueError
from .harness import ExperimentConfig, run_grid, run_point, theory_curves
from .hypercore import Hypergraph, PartiteHypergraph, codegree_function, complete, max_degree
from .randmodel import SampleSpec, coupled_sample, sample_gnp
from .supersat import SupersatConfig, partite_reduce, supersaturation_pipeline

__version__ = "0.1.0"
