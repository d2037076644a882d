#!/usr/bin/env python3
"""Convert a pickled scikit-learn tree model to the glshap tree JSON schema.

Supported estimators: DecisionTreeRegressor, RandomForestRegressor,
ExtraTreesRegressor, GradientBoostingRegressor. Split weights come from
weighted_n_node_samples, so left_fraction is the training mass that went
left at each split.

Usage:
    python tools/convert_sklearn.py model.pkl -o model.json
"""

import argparse
import json
import pickle
import sys


def convert_tree(t, scale=1.0):
    """One fitted sklearn Tree (estimator.tree_) -> {"root": 0, "nodes": [...]}."""
    nodes = []
    w = t.weighted_n_node_samples
    for i in range(t.node_count):
        left, right = int(t.children_left[i]), int(t.children_right[i])
        if left == -1:
            value = float(t.value[i].squeeze()) * scale
            nodes.append({"value": value})
            continue
        if w[i] <= 0.0 or not (0.0 < w[left] < w[i]):
            raise ValueError(
                f"node {i}: left_fraction must lie strictly in (0, 1); "
                f"got {w[left]}/{w[i]} (was the model fit with sample weights "
                "that empty one side?)"
            )
        nodes.append(
            {
                "feature": int(t.feature[i]),
                "threshold": float(t.threshold[i]),
                "left": left,
                "right": right,
                "left_fraction": float(w[left] / w[i]),
            }
        )
    return {"root": 0, "nodes": nodes}


def convert(model):
    name = type(model).__name__
    if hasattr(model, "tree_"):  # a single decision tree
        return {
            "feature_count": int(model.n_features_in_),
            "trees": [convert_tree(model.tree_)],
        }
    if name in ("RandomForestRegressor", "ExtraTreesRegressor"):
        # the forest predicts the mean, so fold 1/n into each tree's leaves
        scale = 1.0 / len(model.estimators_)
        return {
            "feature_count": int(model.n_features_in_),
            "trees": [convert_tree(e.tree_, scale) for e in model.estimators_],
        }
    if name == "GradientBoostingRegressor":
        trees = [
            convert_tree(e.tree_, model.learning_rate)
            for stage in model.estimators_
            for e in stage
        ]
        # the boosting offset is not representable as a tree; report it so the
        # caller can add it back to base_value
        init = getattr(model, "init_", None)
        if init is not None and hasattr(init, "constant_"):
            offset = float(init.constant_.squeeze())
            print(f"note: model has a constant offset {offset!r} not included "
                  "in the trees; add it to base_value when reading predictions",
                  file=sys.stderr)
        return {"feature_count": int(model.n_features_in_), "trees": trees}
    raise TypeError(f"no converter for {name}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("model", help="pickled sklearn estimator (.pkl)")
    ap.add_argument("-o", "--out", default=None, help="output path (default: stdout)")
    args = ap.parse_args(argv)

    with open(args.model, "rb") as f:
        model = pickle.load(f)
    doc = convert(model)

    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
        trees = len(doc["trees"])
        print(f"wrote {args.out} ({trees} trees, {doc['feature_count']} features)")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
