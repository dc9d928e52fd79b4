"""Round-trip and scan oracles over generated programs."""
import re

from confdebug.lang import parse_program, pretty_print, option_load_sites
from confdebug.randgen import random_program_source


def test_roundtrip_on_100_generated_programs():
    for seed in range(100):
        src = random_program_source(seed, max_options=5, max_functions=6,
                                    enum_prob=0.3)
        p = parse_program(src)
        reparsed = parse_program(pretty_print(p))
        assert reparsed.to_sexpr() == p.to_sexpr(), f"seed {seed}"


def test_pretty_print_fixed_point_on_generated_programs():
    for seed in range(40):
        src = random_program_source(seed * 7 + 1, enum_prob=0.2)
        once = pretty_print(parse_program(src))
        assert pretty_print(parse_program(once)) == once, f"seed {seed}"


def test_site_count_matches_textual_scan():
    for seed in range(60):
        src = random_program_source(seed, max_options=5, enum_prob=0.25)
        p = parse_program(src)
        sites = option_load_sites(p)
        total_sites = sum(len(s) for s in sites.values())
        assert total_sites == len(re.findall(r"option\(", src)), f"seed {seed}"
