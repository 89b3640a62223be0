"""Sequential network container with persistence.

Persistence is a JSON manifest (format version, layer specs, seed, and
per-parameter offsets) next to a flat little-endian float64 weight blob.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .layers import Layer, Softmax, layer_from_spec
from .ops import batch_cross_entropy

NETWORK_FORMAT_VERSION = 1


class Network:
    def __init__(self, layers: list[Layer], seed: int | None = None):
        for layer in layers[:-1]:
            if isinstance(layer, Softmax):
                raise ValueError("Softmax is only allowed as the final layer")
        self.layers = layers
        self.seed = seed
        self._activations: list[np.ndarray] | None = None

    @property
    def has_softmax_head(self) -> bool:
        return bool(self.layers) and isinstance(self.layers[-1], Softmax)

    def forward(self, x) -> np.ndarray:
        """Run the stack; caches every intermediate tensor for backward."""
        x = np.asarray(x, dtype=np.float64)
        activations = [x]
        for layer in self.layers:
            x = layer.forward(x)
            activations.append(x)
        self._activations = activations
        return x

    @property
    def activations(self) -> list[np.ndarray]:
        """Input, every intermediate tensor, and the output of the last forward."""
        if self._activations is None:
            raise RuntimeError("no forward pass has been run")
        return self._activations

    def backward(self, target_classes) -> np.ndarray:
        """Backprop of mean cross-entropy through a softmax head.

        The softmax/cross-entropy pair collapses to probs - onehot(target)
        at the logits, so the softmax layer itself is skipped.
        """
        if not self.has_softmax_head:
            raise ValueError("backward(targets) requires a Softmax final layer")
        probs = self._check_cached_batch(target_classes)
        n, k = probs.shape
        targets = np.asarray(target_classes)
        if np.any(targets < 0) or np.any(targets >= k):
            raise IndexError("target class out of range")
        grad = probs.copy()
        grad[np.arange(n), targets] -= 1.0
        grad /= n
        for layer in reversed(self.layers[:-1]):
            grad = layer.backward(grad)
        return grad

    def backward_from(self, output_grad: np.ndarray) -> np.ndarray:
        """Backprop an arbitrary loss gradient from the network output."""
        if self._activations is None:
            raise RuntimeError("backward_from called before forward")
        grad = np.asarray(output_grad, dtype=np.float64)
        if grad.shape != self._activations[-1].shape:
            raise ValueError(
                f"output gradient shape {grad.shape} does not match "
                f"output {self._activations[-1].shape}"
            )
        for layer in reversed(self.layers):
            grad = layer.backward(grad)
        return grad

    def _check_cached_batch(self, targets) -> np.ndarray:
        if self._activations is None:
            raise RuntimeError("backward called before forward")
        probs = self._activations[-1]
        if len(targets) != probs.shape[0]:
            raise ValueError(
                f"{len(targets)} targets for a cached batch of {probs.shape[0]}"
            )
        return probs

    def parameters(self) -> list[np.ndarray]:
        return [p for layer in self.layers for p in layer.params]

    def gradients(self) -> list[np.ndarray]:
        return [g for layer in self.layers for g in layer.grads]

    def n_parameters(self) -> int:
        return sum(p.size for p in self.parameters())

    def loss(self, x, target_classes) -> float:
        """Mean cross-entropy of the softmax output on a batch."""
        return batch_cross_entropy(self.forward(x), target_classes)

    def predict_classes(self, x) -> np.ndarray:
        return np.argmax(self.forward(x), axis=-1)

    # -- persistence ---------------------------------------------------------

    def save(self, directory, name: str) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        blob_name = f"{name}.weights"
        layer_entries = []
        chunks = []
        offset = 0
        for layer in self.layers:
            entry = {"spec": layer.spec(), "params": []}
            for pname, param in zip(layer.param_names, layer.params):
                entry["params"].append({
                    "name": pname,
                    "shape": list(param.shape),
                    "offset": offset,
                })
                chunks.append(param.astype("<f8").tobytes())
                offset += param.size
            layer_entries.append(entry)
        manifest = {
            "format_version": NETWORK_FORMAT_VERSION,
            "seed": self.seed,
            "blob": blob_name,
            "total_values": offset,
            "layers": layer_entries,
        }
        (directory / blob_name).write_bytes(b"".join(chunks))
        manifest_path = directory / f"{name}.json"
        manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
        return manifest_path

    @classmethod
    def load(cls, manifest_path) -> "Network":
        manifest_path = Path(manifest_path)
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        if manifest.get("format_version") != NETWORK_FORMAT_VERSION:
            raise ValueError(f"unsupported network format: {manifest.get('format_version')}")
        blob = np.frombuffer(
            (manifest_path.parent / manifest["blob"]).read_bytes(), dtype="<f8"
        )
        if blob.size != manifest["total_values"]:
            raise ValueError("weight blob size does not match manifest")
        layers = []
        for entry in manifest["layers"]:
            layer = layer_from_spec(entry["spec"])
            for pinfo, param in zip(entry["params"], layer.params):
                size = int(np.prod(pinfo["shape"])) if pinfo["shape"] else 1
                values = blob[pinfo["offset"]:pinfo["offset"] + size]
                param[...] = values.reshape(pinfo["shape"])
            layers.append(layer)
        return cls(layers, seed=manifest.get("seed"))
