from poi_core.nn.tensor import Tensor, Parameter, Tape, as_tensor
from poi_core.nn.functional import (
    matmul, softmax_rows, log_softmax_rows, layer_norm, relu, leaky_relu, concat, embedding_lookup, take_rows,
    take_columns, pick, dropout, sin, reshape, transpose
)
from poi_core.nn.gradcheck import gradient_check
