"""Multiple-unicast linear network codes: fields, transfer shadows, codecs."""

from ._core import (
    Field,
    Network,
    choose_qprime,
    clearance_experiment,
    codec_roundtrip,
    example,
    full_rank_frequency,
    load_network,
    mixer_roundtrip,
    parse_network,
    simulate,
    theorem2_params,
    vanish_rate,
    verify_lemma1,
    verify_shadow,
)

__all__ = [
    "Field",
    "Network",
    "choose_qprime",
    "clearance_experiment",
    "codec_roundtrip",
    "example",
    "full_rank_frequency",
    "load_network",
    "mixer_roundtrip",
    "parse_network",
    "simulate",
    "theorem2_params",
    "vanish_rate",
    "verify_lemma1",
    "verify_shadow",
]
