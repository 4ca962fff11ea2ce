"""Split hypergraph fault models into graph-like ones and decode them.

The pipeline is: build or load a :class:`~hypersplit.fault_model.FaultModel`,
split it with :mod:`hypersplit.splitting`, then decode syndromes with the
matching or Union-Find decoders of :mod:`hypersplit.decoders` on the split
model's :class:`~hypersplit.decoding_graph.DecodingGraph`.
"""

from hypersplit.decoders import DecodeResult, mwpm_decode, uf_decode
from hypersplit.decoding_graph import DecodingGraph, build_decoding_graph
from hypersplit.errors import HypersplitError
from hypersplit.fault_model import (
    Fault,
    FaultModel,
    load_model,
    merge_duplicates,
    read_model,
    save_model,
    write_model,
)
from hypersplit.splitting import (
    SplitReport,
    primitive_faults,
    split_combined,
    split_decoder_based,
    split_recursive,
)

__version__ = "0.1.0"

__all__ = [
    "DecodeResult",
    "DecodingGraph",
    "Fault",
    "FaultModel",
    "HypersplitError",
    "SplitReport",
    "build_decoding_graph",
    "load_model",
    "merge_duplicates",
    "mwpm_decode",
    "primitive_faults",
    "read_model",
    "save_model",
    "split_combined",
    "split_decoder_based",
    "split_recursive",
    "uf_decode",
    "write_model",
]
