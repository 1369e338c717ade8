import threading

import numpy as np

from poi_core.nn.exceptions import ShapeMismatch


_state = threading.local()


def get_active_tape():
    tapes = getattr(_state, 'tapes', None)
    return tapes[-1] if tapes else None


class Tape(object):
    """
    Ordered record of the primitive operations executed while the tape is active. Replaying the record in
    reverse computes the gradient of one scalar with respect to every leaf tensor requiring gradient.
    A tape belongs to the thread which entered it.
    """

    def __init__(self):
        self.records = []

    def __enter__(self):
        if not hasattr(_state, 'tapes'):
            _state.tapes = []
        _state.tapes.append(self)
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        _state.tapes.remove(self)

    def __len__(self):
        return len(self.records)

    def record(self, result, operands, backward):
        self.records.append((result, operands, backward))

    def backward(self, scalar):
        if scalar.data.size != 1:
            raise ShapeMismatch('Gradient can only be computed for a scalar, got shape %s' % (scalar.shape,))

        grads = {id(scalar): np.ones_like(scalar.data)}
        leaves = {}
        if scalar.is_leaf and scalar.requires_grad:
            leaves[id(scalar)] = scalar
        for result, operands, backward in reversed(self.records):
            grad = grads.pop(id(result), None)
            if grad is None:
                continue
            for operand, operand_grad in zip(operands, backward(grad)):
                if operand_grad is None or not operand.requires_grad:
                    continue
                key = id(operand)
                grads[key] = grads[key] + operand_grad if key in grads else operand_grad
                if operand.is_leaf:
                    leaves[key] = operand

        for key, tensor in leaves.items():
            tensor.accumulate(grads[key])


class Tensor(object):
    """
    Dense row-major double precision array.
    """

    is_leaf = True

    def __init__(self, data, requires_grad=False, name=None):
        self.data = np.array(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.name = name
        self.grad = None

    @classmethod
    def from_operation(cls, data, operands, backward):
        result = cls.__new__(cls)
        result.data = np.asarray(data, dtype=np.float64)
        result.requires_grad = any(operand.requires_grad for operand in operands)
        result.name = None
        result.grad = None
        result.is_leaf = False
        if result.requires_grad:
            tape = get_active_tape()
            if tape is not None:
                tape.record(result, operands, backward)
        return result

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    def item(self):
        return float(self.data.reshape(()))

    def numpy(self):
        return self.data

    def accumulate(self, grad):
        self.grad = grad.copy() if self.grad is None else self.grad + grad

    def __repr__(self):
        return 'Tensor(%s%s)' % (self.data, self.name and ', name=%s' % self.name or '')

    def __add__(self, other):
        return functional.add(self, other)

    def __radd__(self, other):
        return functional.add(other, self)

    def __sub__(self, other):
        return functional.sub(self, other)

    def __rsub__(self, other):
        return functional.sub(other, self)

    def __mul__(self, other):
        return functional.mul(self, other)

    def __rmul__(self, other):
        return functional.mul(other, self)

    def __neg__(self):
        return functional.neg(self)

    def __matmul__(self, other):
        return functional.matmul(self, other)

    @property
    def T(self):
        return functional.transpose(self)

    def sum(self, axis=None):
        return functional.sum(self, axis)

    def mean(self):
        return functional.mean(self)


class Parameter(Tensor):
    """
    Trainable tensor. Its gradient has the shape of its value.
    """

    def __init__(self, data, name=None):
        super(Parameter, self).__init__(data, requires_grad=True, name=name)
        self.zero_grad()

    @property
    def value(self):
        return self.data

    @property
    def gradient(self):
        return self.grad

    def zero_grad(self):
        self.grad = np.zeros_like(self.data)


def as_tensor(value):
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


from poi_core.nn import functional  # noqa: E402
