"""
Differentiable primitives. Every function takes and returns Tensors and records itself on the active tape.
"""
import numpy as np

from poi_core.nn.exceptions import ShapeMismatch, AllMaskedRow, IndexOutOfRange
from poi_core.nn.tensor import Tensor, as_tensor


def unbroadcast(grad, shape):
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def check_broadcast(a, b):
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeMismatch('Cannot broadcast %s and %s' % (a.shape, b.shape))


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    check_broadcast(a, b)

    def backward(grad):
        return unbroadcast(grad, a.shape), unbroadcast(grad, b.shape)
    return Tensor.from_operation(a.data + b.data, (a, b), backward)


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    check_broadcast(a, b)

    def backward(grad):
        return unbroadcast(grad, a.shape), unbroadcast(-grad, b.shape)
    return Tensor.from_operation(a.data - b.data, (a, b), backward)


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    check_broadcast(a, b)

    def backward(grad):
        return unbroadcast(grad * b.data, a.shape), unbroadcast(grad * a.data, b.shape)
    return Tensor.from_operation(a.data * b.data, (a, b), backward)


def neg(x):
    return Tensor.from_operation(-x.data, (x,), lambda grad: (-grad,))


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeMismatch('Cannot multiply %s by %s' % (a.shape, b.shape))

    def backward(grad):
        return grad @ b.data.T, a.data.T @ grad
    return Tensor.from_operation(a.data @ b.data, (a, b), backward)


def transpose(x):
    if x.ndim != 2:
        raise ShapeMismatch('Only matrices can be transposed, got %s' % (x.shape,))
    return Tensor.from_operation(x.data.T, (x,), lambda grad: (grad.T,))


def reshape(x, shape):
    original = x.shape
    try:
        data = x.data.reshape(shape)
    except ValueError:
        raise ShapeMismatch('Cannot reshape %s to %s' % (original, shape))
    return Tensor.from_operation(data, (x,), lambda grad: (grad.reshape(original),))


def sum(x, axis=None):
    def backward(grad):
        if axis is not None:
            grad = np.expand_dims(grad, axis)
        return np.broadcast_to(grad, x.shape).copy(),
    return Tensor.from_operation(x.data.sum(axis=axis), (x,), backward)


def mean(x):
    return mul(sum(x), 1.0 / x.size)


def sin(x):
    return Tensor.from_operation(np.sin(x.data), (x,), lambda grad: (grad * np.cos(x.data),))


def relu(x):
    positive = x.data > 0
    return Tensor.from_operation(np.where(positive, x.data, 0.0), (x,), lambda grad: (grad * positive,))


def leaky_relu(x, slope=0.2):
    # the derivative at exactly 0 takes the negative side slope
    positive = x.data > 0
    factor = np.where(positive, 1.0, slope)
    return Tensor.from_operation(x.data * factor, (x,), lambda grad: (grad * factor,))


def dropout(x, rate, random_state=None):
    """
    Inverted dropout, identity when rate is 0 or no random state is given (evaluation).
    """
    if not rate or random_state is None:
        return x
    keep = (random_state.uniform(size=x.shape) >= rate) / (1.0 - rate)
    return mul(x, Tensor(keep))


def check_mask(x, mask):
    if mask is None:
        return np.ones(x.shape, dtype=bool)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != x.shape:
        raise ShapeMismatch('Mask shape %s differs from %s' % (mask.shape, x.shape))
    if not mask.any(axis=-1).all():
        raise AllMaskedRow()
    return mask


def softmax_rows(x, mask=None):
    """
    Row-wise softmax over the unmasked entries, masked entries are exactly 0.
    """
    if x.ndim != 2:
        raise ShapeMismatch('softmax_rows expects a matrix, got %s' % (x.shape,))
    mask = check_mask(x, mask)
    row_max = np.max(np.where(mask, x.data, -np.inf), axis=1, keepdims=True)
    exp = np.where(mask, np.exp(np.where(mask, x.data - row_max, 0.0)), 0.0)
    probabilities = exp / exp.sum(axis=1, keepdims=True)

    def backward(grad):
        return probabilities * (grad - (grad * probabilities).sum(axis=1, keepdims=True)),
    return Tensor.from_operation(probabilities, (x,), backward)


def log_softmax_rows(x):
    if x.ndim != 2:
        raise ShapeMismatch('log_softmax_rows expects a matrix, got %s' % (x.shape,))
    shifted = x.data - x.data.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    total = exp.sum(axis=1, keepdims=True)
    probabilities = exp / total

    def backward(grad):
        return grad - probabilities * grad.sum(axis=1, keepdims=True),
    return Tensor.from_operation(shifted - np.log(total), (x,), backward)


def layer_norm(x, gain, bias, eps=1e-5):
    """
    Per-row standardization followed by gain * x + bias. Rows with zero variance standardize to zeros.
    """
    if x.ndim != 2 or gain.shape != (x.shape[1],) or bias.shape != (x.shape[1],):
        raise ShapeMismatch('layer_norm of %s with gain %s and bias %s' % (x.shape, gain.shape, bias.shape))
    centered = x.data - x.data.mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt((centered ** 2).mean(axis=1, keepdims=True) + eps)
    constant = (x.data.max(axis=1) == x.data.min(axis=1))[:, None]
    normalized = np.where(constant, 0.0, centered * inv_std)

    def backward(grad):
        grad_normalized = grad * gain.data
        grad_x = inv_std * (grad_normalized - grad_normalized.mean(axis=1, keepdims=True)
                            - normalized * (grad_normalized * normalized).mean(axis=1, keepdims=True))
        return grad_x, (grad * normalized).sum(axis=0), grad.sum(axis=0)
    return Tensor.from_operation(normalized * gain.data + bias.data, (x, gain, bias), backward)


def concat(tensors, axis=0):
    tensors = [as_tensor(tensor) for tensor in tensors]
    try:
        data = np.concatenate([tensor.data for tensor in tensors], axis=axis)
    except ValueError:
        raise ShapeMismatch('Cannot concatenate %s along axis %s' % ([t.shape for t in tensors], axis))
    boundaries = np.cumsum([tensor.shape[axis] for tensor in tensors])[:-1]

    def backward(grad):
        return np.split(grad, boundaries, axis=axis)
    return Tensor.from_operation(data, tuple(tensors), backward)


def check_indices(indices, size):
    indices = np.asarray(indices)
    if indices.dtype.kind not in 'iu':
        raise IndexOutOfRange('Indices must be integers, got %s' % indices.dtype)
    if indices.size and (indices.min() < 0 or indices.max() >= size):
        raise IndexOutOfRange('Index outside of [0, %s)' % size)
    return indices


def take_rows(x, indices):
    """
    Gather rows; a scalar index returns a vector, a sequence of indices a matrix.
    """
    indices = check_indices(indices, x.shape[0])

    def backward(grad):
        full = np.zeros_like(x.data)
        np.add.at(full, indices, grad)
        return full,
    return Tensor.from_operation(x.data[indices], (x,), backward)


def embedding_lookup(table, index):
    return take_rows(table, index)


def take_columns(x, start, stop):
    if x.ndim != 2 or not 0 <= start < stop <= x.shape[1]:
        raise IndexOutOfRange('Columns [%s, %s) of %s' % (start, stop, x.shape))

    def backward(grad):
        full = np.zeros_like(x.data)
        full[:, start:stop] = grad
        return full,
    return Tensor.from_operation(x.data[:, start:stop], (x,), backward)


def pick(x, rows, columns):
    """
    Elements x[rows[i], columns[i]] as a vector.
    """
    rows = check_indices(rows, x.shape[0])
    columns = check_indices(columns, x.shape[1])

    def backward(grad):
        full = np.zeros_like(x.data)
        np.add.at(full, (rows, columns), grad)
        return full,
    return Tensor.from_operation(x.data[rows, columns], (x,), backward)
