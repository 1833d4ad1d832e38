"""Deterministic decision trees over categorical feature vectors.

A feature vector is a plain dict of feature name -> categorical value
(string); absent keys mean "missing", which is treated as an ordinary
category during fitting.  Splits maximize the Gini impurity reduction
normalized by split information (a gain-ratio variant, with the usual
mean-gain eligibility guard), with ties broken by lexicographically
smallest feature name, so the fitted tree is a pure function of the
dataset (example order never matters).

Two fit paths produce the same tree structure:
  * dt_fit        - general categorical data, dense integer codes
  * dt_fit_binary - all-binary features given as a scipy CSR matrix; used
                    for large one-hot state encodings where a dense scan
                    would be too slow
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FeatureVector = dict[str, str]

_EPS = 1e-12


@dataclass
class Node:
    counts: dict[str, int]
    label: str  # majority label, deterministic tie-break by label string
    confidence: float
    feature: str | None = None
    children: dict[str, "Node"] | None = None  # value -> child
    missing_child: "Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass
class DecisionTree:
    root: Node
    n_examples: int

    def predict(self, fv: FeatureVector) -> tuple[str, float]:
        node = self.root
        while not node.is_leaf:
            value = fv.get(node.feature)
            if value is None:
                child = node.missing_child
            else:
                child = node.children.get(value)
            if child is None:
                break  # unseen value or missing feature: node majority
            node = child
        return node.label, node.confidence


def _majority(counts: dict[str, int]) -> tuple[str, float]:
    total = sum(counts.values())
    label = min(counts, key=lambda c: (-counts[c], c))
    return label, counts[label] / total


class Encoder:
    """Incremental feature/value integer coder.

    Code 0 is reserved for "missing" in every feature.  Rows are stored as
    code lists aligned with the feature order at append time; rows shorter
    than the current feature count are implicitly missing-padded.
    """

    def __init__(self):
        self.feature_names: list[str] = []
        self.feature_index: dict[str, int] = {}
        self.value_codes: list[dict[str, int]] = []
        self.value_names: list[list[str]] = []
        self.rows: list[list[int]] = []
        self.labels: list[str] = []

    def _feature(self, name: str) -> int:
        j = self.feature_index.get(name)
        if j is None:
            j = len(self.feature_names)
            self.feature_index[name] = j
            self.feature_names.append(name)
            self.value_codes.append({})
            self.value_names.append([None])  # slot 0 = missing
        return j

    def _code(self, j: int, value: str) -> int:
        code = self.value_codes[j].get(value)
        if code is None:
            code = len(self.value_names[j])
            self.value_codes[j][value] = code
            self.value_names[j].append(value)
        return code

    def add(self, fv: FeatureVector, label: str):
        row = [0] * len(self.feature_names)
        for name, value in fv.items():
            j = self._feature(name)
            if j < len(row):
                row[j] = self._code(j, value)
            else:
                row.extend([0] * (j + 1 - len(row)))
                row[j] = self._code(j, value)
        self.rows.append(row)
        self.labels.append(label)

    def matrix(self) -> tuple[np.ndarray, np.ndarray, list[str]]:
        n, f = len(self.rows), len(self.feature_names)
        X = np.zeros((n, f), dtype=np.int32)
        for i, row in enumerate(self.rows):
            X[i, : len(row)] = row
        label_names = sorted(set(self.labels))
        label_code = {name: c for c, name in enumerate(label_names)}
        y = np.array([label_code[l] for l in self.labels], dtype=np.int32)
        return X, y, label_names


def _select_split(gains: dict, split_infos: dict, order) -> int | None:
    """Gain-ratio split choice with the usual mean-gain guard.

    Raw impurity reduction favors high-cardinality features that shatter
    the node into singletons; normalizing by split information restores
    generalization.  Only features whose gain reaches the mean positive
    gain compete, which blocks the near-constant-feature pathology.
    Ties break on the lexicographically smallest feature name (callers
    pass `order` sorted that way).
    """
    if not gains:
        return None
    mean_gain = sum(gains.values()) / len(gains)
    best_j, best_ratio = None, 0.0
    for j in order:
        gain = gains.get(j)
        if gain is None or gain + _EPS < mean_gain:
            continue
        ratio = gain / max(split_infos[j], _EPS)
        if ratio > best_ratio + _EPS:
            best_ratio, best_j = ratio, j
    return best_j


def _counts_dict(y: np.ndarray, label_names: list[str]) -> dict[str, int]:
    bc = np.bincount(y, minlength=len(label_names))
    return {label_names[c]: int(bc[c]) for c in range(len(label_names)) if bc[c]}


def _build_dense(X, y, feature_names, value_names, label_names, order) -> Node:
    counts = _counts_dict(y, label_names)
    label, conf = _majority(counts)
    n = len(y)
    parent_bc = np.bincount(y, minlength=len(label_names)).astype(np.float64)
    parent_term = n - (parent_bc ** 2).sum() / n
    if parent_term <= _EPS:
        return Node(counts, label, conf)

    n_labels = len(label_names)
    gains = {}
    split_infos = {}
    fallback_j = None  # lexicographically first splittable feature
    for j in order:  # lexicographic feature order: first strict max wins ties
        col = X[:, j]
        nv = len(value_names[j])
        cm = np.bincount(col * n_labels + y, minlength=nv * n_labels)
        cm = cm.reshape(nv, n_labels).astype(np.float64)
        sizes = cm.sum(axis=1)
        nz = sizes > 0
        if nz.sum() < 2:
            continue
        if fallback_j is None:
            fallback_j = j
        child_term = (sizes[nz] - (cm[nz] ** 2).sum(axis=1) / sizes[nz]).sum()
        gain = (parent_term - child_term) / n
        if gain > _EPS:
            frac = sizes[nz] / n
            gains[j] = gain
            split_infos[j] = -(frac * np.log2(frac)).sum()
    best_j = _select_split(gains, split_infos, order)
    if best_j is None:
        # zero gain everywhere but the node is impure: split anyway on the
        # first splittable feature so consistent data is always separated
        # (XOR needs this); recursion still terminates because children
        # are strictly smaller
        best_j = fallback_j
    if best_j is None:
        return Node(counts, label, conf)

    node = Node(counts, label, conf, feature=feature_names[best_j], children={})
    col = X[:, best_j]
    for code in np.unique(col):
        mask = col == code
        child = _build_dense(
            X[mask], y[mask], feature_names, value_names, label_names, order
        )
        if code == 0:
            node.missing_child = child
        else:
            node.children[value_names[best_j][code]] = child
    return node


def fit_encoded(enc: Encoder) -> DecisionTree:
    if not enc.rows:
        raise ValueError("cannot fit on an empty dataset")
    X, y, label_names = enc.matrix()
    order = sorted(range(len(enc.feature_names)), key=lambda j: enc.feature_names[j])
    root = _build_dense(X, y, enc.feature_names, enc.value_names, label_names, order)
    return DecisionTree(root, len(y))


def dt_fit(dataset: list[tuple[FeatureVector, str]]) -> DecisionTree:
    """Fit from scratch; order-independent by construction."""
    if not dataset:
        raise ValueError("cannot fit on an empty dataset")
    names = sorted({k for fv, _ in dataset for k in fv})
    enc = Encoder()
    for name in names:
        j = enc._feature(name)
        for value in sorted({fv[name] for fv, _ in dataset if name in fv}):
            enc._code(j, value)
    for fv, label in dataset:
        enc.add(fv, label)
    return fit_encoded(enc)


def dt_predict(tree: DecisionTree, fv: FeatureVector) -> tuple[str, float]:
    return tree.predict(fv)


def dt_fit_binary(X_csr, y_labels: list[str], feature_names: list[str]) -> DecisionTree:
    """Fit on an all-binary CSR matrix; children are keyed "0"/"1"."""
    import scipy.sparse as sp

    n = X_csr.shape[0]
    if n == 0:
        raise ValueError("cannot fit on an empty dataset")
    label_names = sorted(set(y_labels))
    label_code = {name: c for c, name in enumerate(label_names)}
    y = np.array([label_code[l] for l in y_labels], dtype=np.int32)
    Xc = sp.csc_matrix(X_csr)
    order = np.argsort(np.array(feature_names))

    def build(rows: np.ndarray) -> Node:
        yr = y[rows]
        counts = _counts_dict(yr, label_names)
        label, conf = _majority(counts)
        m = len(rows)
        bc = np.bincount(yr, minlength=len(label_names)).astype(np.float64)
        parent_term = m - (bc ** 2).sum() / m
        if parent_term <= _EPS:
            return Node(counts, label, conf)

        Xr = X_csr[rows]
        n1 = np.asarray(Xr.sum(axis=0)).ravel().astype(np.float64)
        sq1 = np.zeros_like(n1)
        sq0 = np.zeros_like(n1)
        for c in np.nonzero(bc)[0]:
            ones_c = np.asarray(Xr[yr == c].sum(axis=0)).ravel().astype(np.float64)
            sq1 += ones_c ** 2
            sq0 += (bc[c] - ones_c) ** 2
        n0 = m - n1
        with np.errstate(divide="ignore", invalid="ignore"):
            t1 = np.where(n1 > 0, n1 - sq1 / np.where(n1 > 0, n1, 1), 0.0)
            t0 = np.where(n0 > 0, n0 - sq0 / np.where(n0 > 0, n0, 1), 0.0)
        gain_arr = (parent_term - (t1 + t0)) / m
        gain_arr[(n1 == 0) | (n0 == 0)] = 0.0

        gains = {}
        split_infos = {}
        for j in np.nonzero(gain_arr > _EPS)[0]:
            f1 = n1[j] / m
            gains[int(j)] = float(gain_arr[j])
            split_infos[int(j)] = float(
                -(f1 * np.log2(f1) + (1 - f1) * np.log2(1 - f1))
            )
        best_j = _select_split(gains, split_infos, order)
        if best_j is None:
            splittable = (n1 > 0) & (n0 > 0)
            for j in order:
                if splittable[j]:
                    best_j = j
                    break
        if best_j is None:
            return Node(counts, label, conf)

        col = Xc.getcol(int(best_j))
        on = np.zeros(n, dtype=bool)
        on[col.indices] = True
        mask = on[rows]
        node = Node(counts, label, conf, feature=feature_names[best_j], children={})
        node.children["1"] = build(rows[mask])
        node.children["0"] = build(rows[~mask])
        return node

    root = build(np.arange(n))
    return DecisionTree(root, n)
