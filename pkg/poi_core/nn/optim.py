import numpy as np


class Optimizer(object):

    def __init__(self, params, learning_rate):
        self.params = list(params)
        self.learning_rate = learning_rate

    def zero_grad(self):
        for param in self.params:
            param.zero_grad()

    def step(self):
        raise NotImplementedError


class SGD(Optimizer):

    def step(self):
        for param in self.params:
            param.data -= self.learning_rate * param.gradient


class Adam(Optimizer):
    """
    Adaptive per-coordinate moment estimation.
    """

    beta1 = 0.9
    beta2 = 0.999
    eps = 1e-8

    def __init__(self, params, learning_rate):
        super(Adam, self).__init__(params, learning_rate)
        self.steps = 0
        self.first_moments = [np.zeros_like(param.data) for param in self.params]
        self.second_moments = [np.zeros_like(param.data) for param in self.params]

    def step(self):
        self.steps += 1
        first_correction = 1.0 - self.beta1 ** self.steps
        second_correction = 1.0 - self.beta2 ** self.steps
        for param, first, second in zip(self.params, self.first_moments, self.second_moments):
            gradient = param.gradient
            first *= self.beta1
            first += (1.0 - self.beta1) * gradient
            second *= self.beta2
            second += (1.0 - self.beta2) * gradient ** 2
            param.data -= self.learning_rate * (first / first_correction) / (
                np.sqrt(second / second_correction) + self.eps)
