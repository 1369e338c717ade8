import numpy as np

from poi_core.nn.tensor import Tape


def relative_error(analytic, numeric):
    return abs(analytic - numeric) / max(1e-8, abs(analytic) + abs(numeric))


def gradient_check(scalar_fn, params, h=1e-5, n_coordinates=64, seed=0):
    """
    Compares tape gradients of scalar_fn() with central differences (f(p + h) - f(p - h)) / 2h.
    Parameters larger than n_coordinates are checked on a seeded sample of n_coordinates entries.
    Returns the maximal relative error.
    """
    for param in params:
        param.zero_grad()
    with Tape() as tape:
        output = scalar_fn()
        tape.backward(output)
    analytic = [param.gradient.copy() for param in params]

    random_state = np.random.RandomState(seed)
    max_error = 0.0
    for param, gradient in zip(params, analytic):
        if param.size <= n_coordinates:
            coordinates = np.arange(param.size)
        else:
            coordinates = np.sort(random_state.choice(param.size, n_coordinates, replace=False))
        flat = param.data.reshape(-1)
        for coordinate in coordinates:
            original = flat[coordinate]
            flat[coordinate] = original + h
            plus = scalar_fn().item()
            flat[coordinate] = original - h
            minus = scalar_fn().item()
            flat[coordinate] = original
            numeric = (plus - minus) / (2.0 * h)
            max_error = max(max_error, relative_error(gradient.reshape(-1)[coordinate], numeric))
    return max_error
