"""JSON schemas (draft 7) for every JSON document the command line emits."""

FORMAT = "cocycle-forge/1"

_scalar = {"oneOf": [
    {"type": "integer"},
    {"type": "object", "required": ["num", "den"],
     "properties": {"num": {"type": "array", "items": {"type": "integer"}},
                    "den": {"type": "array", "items": {"type": "integer"}}}},
]}


def _doc(kind, required, props):
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["format", "kind"] + list(required),
        "properties": {"format": {"const": FORMAT}, "kind": {"const": kind}, **props},
    }


SCHEMAS = {
    "ball": _doc("ball", ["q", "radius", "vertices", "edges"], {
        "q": {"type": "integer"}, "radius": {"type": "integer"},
        "vertices": {"type": "array", "items": {"type": "string"}},
        "edges": {"type": "array", "items": {"type": "array", "items": {"type": "string"},
                                             "minItems": 2, "maxItems": 2}},
    }),
    "quotient": _doc("quotient", ["gamma", "q", "depth", "betti1", "vertices", "edges", "cusps"], {
        "gamma": {"type": "string"}, "q": {"type": "integer"}, "depth": {"type": "integer"},
        "betti1": {"type": "integer"},
        "vertices": {"type": "array", "items": {"type": "object",
                                                "required": ["id", "type", "stabilizer_order"]}},
        "edges": {"type": "array", "items": {"type": "object",
                                             "required": ["id", "origin", "terminus", "witness"]}},
        "cusps": {"type": "array"},
    }),
    "cocycles": _doc("cocycles", ["gamma", "weight", "ring", "depth", "dimension", "basis"], {
        "gamma": {"type": "string"}, "weight": {"type": "integer"}, "ring": {"type": "string"},
        "depth": {"type": "integer"}, "dimension": {"type": "integer"},
        "invariant_factors": {"type": "array", "items": {"type": "integer"}},
        "basis": {"type": "array", "items": {"type": "array", "items": {
            "type": "object", "required": ["orbit_id", "dual_coords"],
            "properties": {"orbit_id": {"type": "integer"},
                           "dual_coords": {"type": "array", "items": _scalar}}}}},
    }),
    "pairing": _doc("pairing", ["gamma", "weight", "rows"], {
        "rows": {"type": "array", "items": {"type": "object",
                                            "required": ["basis", "value", "refined_value"]}},
    }),
    "roundtrip": _doc("roundtrip", ["gamma", "weight", "rows"], {
        "rows": {"type": "array", "items": {"type": "object", "required": [
            "basis", "roundtrip", "equivariance_checks", "equivariance_failures"]}},
    }),
    "lift": _doc("lift", ["gamma", "k", "rows"], {
        "k": {"type": "integer"},
        "rows": {"type": "array", "items": {"type": "object",
                                            "required": ["basis", "reduces_exactly", "residual_zero"]}},
    }),
    "weight2": _doc("weight2", ["gamma", "free_rank", "invariant_factors", "reduction_surjective"], {
        "free_rank": {"type": "integer"},
        "invariant_factors": {"type": "array", "items": {"type": "integer"}},
        "reduction_surjective": {"type": "boolean"},
    }),
    "finding": _doc("finding", ["command", "message"], {
        "command": {"type": "string"}, "message": {"type": "string"},
    }),
}
