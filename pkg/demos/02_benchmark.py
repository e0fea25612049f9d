"""Walkthrough: generate a desk-scale scenario corpus, inject faults, and
score the receipt engine against the regex baseline."""

from pramana.bench import generate_scenarios, run_benchmark

scenarios = generate_scenarios(
    seed=20240219,
    hallucinated_per_lang=60,   # 10 of each of the six fault types
    clean_per_lang=30,
    compliance_fraction=0.9,    # one response in ten omits its tag block
    plant_error_rate=0.01,      # 1% of clean responses carry a tool-data error
)
print(f"{len(scenarios)} scenarios across EN/HI/ZH/ES\n")

sample = next(s for s in scenarios if s.injected and s.lang == "ZH")
print(f"sample injected scenario ({sample.injected['type']}, {sample.lang}):")
print(" ", sample.llm_response.splitlines()[0], "\n")

for detector in ("engine", "regex"):
    report = run_benchmark(scenarios, detector=detector)
    print(report.format_tables())
    print()
