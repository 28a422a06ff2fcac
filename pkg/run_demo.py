#!/usr/bin/env python3
"""
Quick demo: the virus scenario end to end
"""

from pathlib import Path

from colorama import init, Fore

from src.axiom_suite import SchemaId, check_catalog
from src.histories import generate_universe
from src.model_checker import EvalContext, satisfies
from src.parser import parse_formula, parse_model
from src.state_model import render_forest
from src.transitions import enabled_actions, fire

init(autoreset=True)

MODELS = Path(__file__).parent / "models"


def _show_forest(state):
    for line in render_forest(state):
        print(f"    {line}")


def run_demo():
    """Walk through one virus entry, its consequences and a short axiom run"""

    print(f"{Fore.MAGENTA}{'='*70}")
    print(f"{Fore.MAGENTA}PADEL WORKBENCH - DEMO")
    print(f"{Fore.MAGENTA}{'='*70}\n")

    model = parse_model((MODELS / "virus.padel").read_text())
    s0 = model.state("s0")

    print(f"{Fore.YELLOW}Initial forest:")
    _show_forest(s0)

    label = enabled_actions(s0)[0]
    print(f"\n{Fore.YELLOW}Enabled: {label.text}")
    s1 = fire(s0, label).state
    print(f"{Fore.YELLOW}After the virus enters:")
    _show_forest(s1)

    universe = generate_universe(model, depth=2)
    ctx = EvalContext(universe)
    checks = [
        ("s0", "<(enter@A, accept@C, E)>true => (A < E & C < E)"),
        ("s0", "[(enter@A, accept@C, E)](A < C)"),
        ("s0/0", "K[C](A <+ C)"),
        ("s0", "A <+ C"),
    ]
    print(f"\n{Fore.CYAN}Formula checks:")
    for path, text in checks:
        verdict = satisfies(ctx, path, parse_formula(text, model.agents))
        mark = f"{Fore.GREEN}✓" if verdict else f"{Fore.RED}✗"
        print(f"  {mark} {path:<6} {text}")

    print(f"\n{Fore.CYAN}Axiom sample:")
    sample = [SchemaId.CONS_II_PRE, SchemaId.CONS_II_POST, SchemaId.KOWN, SchemaId.TREE,
              SchemaId.PERFECT_RECALL, SchemaId.ORACLE_AGREEMENT]
    for report in check_catalog(universe, sample):
        status = f"{Fore.GREEN}PASS" if report.passed else f"{Fore.RED}FAIL"
        print(f"  {report.schema.value:<18} {report.instances_checked:>4} instances  {status}")

    print(f"\n{Fore.MAGENTA}{'='*70}")
    print(f"{Fore.MAGENTA}Try: python main.py axioms models/virus.padel --depth 2")
    print(f"{Fore.MAGENTA}{'='*70}")


if __name__ == "__main__":
    run_demo()
