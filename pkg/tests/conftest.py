import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from grambench import data as demo_data
from grambench.grammar import load_grammar
from grambench.lexicon import BoundLexicon, load_interface_rules, load_lexicon


@pytest.fixture(scope="session")
def demo_paths():
    return {
        "idlp": demo_data.path("demo.idlp"),
        "dcg": demo_data.path("demo.dcg"),
        "lfg": demo_data.path("demo.lfg"),
        "lex": demo_data.path("demo.lex"),
        "ifr": demo_data.path("demo.ifr"),
        "suites": demo_data.suite_paths(),
    }


@pytest.fixture(scope="session")
def idlp_grammar(demo_paths):
    return load_grammar(demo_paths["idlp"])


@pytest.fixture(scope="session")
def dcg_grammar(demo_paths):
    return load_grammar(demo_paths["dcg"])


@pytest.fixture(scope="session")
def lfg_grammar(demo_paths):
    return load_grammar(demo_paths["lfg"])


@pytest.fixture(scope="session")
def demo_lexicon(demo_paths):
    lexicon = load_lexicon(demo_paths["lex"])
    rules = load_interface_rules(demo_paths["ifr"])
    return BoundLexicon(lexicon, rules)
