"""From-scratch neural-network engine on float64 numpy arrays."""

from .adam import Adam
from .gradcheck import grad_check, relu_preactivation_margin
from .layers import Conv2d, Dense, Flatten, MaxPool2d, Relu, Softmax
from .network import Network
from .ops import accuracy, batch_cross_entropy, cross_entropy, relu, sigmoid, softmax
from .train import (EpochRecord, TrainConfig, TrainingHistory,
                    evaluate_classifier, train_classifier)

__all__ = [
    "Adam", "Conv2d", "Dense", "EpochRecord", "Flatten", "MaxPool2d",
    "Network", "Relu", "Softmax", "TrainConfig", "TrainingHistory",
    "accuracy", "batch_cross_entropy", "cross_entropy", "evaluate_classifier",
    "grad_check", "relu", "relu_preactivation_margin", "sigmoid", "softmax",
    "train_classifier",
]
