"""Command-line front end.

    cfdim analyze 3/7
    cfdim dimension --freq gauss.json --N 5,10,20 --k 1,2
    cfdim verify --suite all --seed 1
    cfdim sample --probs 0.5,0.5 --n 10000
    cfdim profile --log-b 10 --depth 100 --count 20

Every option may also come from a JSON file given by ``--config``; flags
override the file.  Floats are printed with 12 significant digits.

Exit codes: 0 success, 1 verification failures, 2 usage or parse error,
3 infeasible constraints, 4 budget exceeded, 5 solver non-convergence.
"""

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .cf_core import DEFAULT_BUDGET, as_word, convergents, cf_expand, interval_length, parse_rational
from .constructions import (
    PROFILE_COLUMNS,
    FzParameters,
    GrowthSequence,
    fz_point,
    local_dimension_profile,
    seed_point,
)
from .errors import BudgetExceededError, ConvergenceError, DomainError, InfeasibleError
from .frequencies import FrequencyVector, load_frequency_vector
from .optimizer import SolverOptions, dimension
from .verify import SUITES, run_suite
from .word_stats import digit_frequency

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_BUDGET, EXIT_NONCONVERGENCE = range(6)

DEFAULTS = {
    "seed": 0, "format": "csv", "out": None, "jobs": 1,
    "depth": None, "N": [5, 10, 20], "k": [1, 2], "objective": "block", "timing": False,
    "suite": "all", "trials": None, "n": 1000, "count": 1, "growth": "identity",
    "b": None, "log_b": None, "solver": {},
}


class UsageError(Exception):
    pass


def _num(v):
    if isinstance(v, bool) or not isinstance(v, float):
        return v
    return float(f"{v:.12g}") if math.isfinite(v) else str(v)


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return "" if v is None else str(v)


def _round_floats(obj):
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return _num(obj)


def _csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _int_list(text):
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


def parse_number_or_word(text):
    """A rational such as ``3/7`` or ``0.625``, or a digit list such as ``1,2,1``.

    Returns ``(word, value)``; ``value`` is ``None`` for digit lists.
    """
    text = text.strip()
    if "," in text or text.startswith("["):
        body = text.strip("[]")
        word, pos = [], text.find(body)
        for tok in body.split(","):
            t = tok.strip()
            if not t.isdigit() or int(t) < 1:
                raise UsageError(f"bad digit {tok!r} at character {pos + 1}")
            word.append(int(t))
            pos += len(tok) + 1
        return tuple(word), None
    try:
        x = parse_rational(text)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if not 0 < x < 1:
        raise UsageError(f"{text} is not in (0, 1)")
    return None, x


def _load_freq(cfg, required=True):
    if cfg.get("probs") is not None:
        probs = cfg["probs"]
        if isinstance(probs, str):
            try:
                probs = [float(v) for v in probs.split(",")]
            except ValueError:
                raise UsageError(f"bad --probs {cfg['probs']!r}") from None
        return FrequencyVector.from_sequence(probs)
    src = cfg.get("freq")
    if src is None:
        if required:
            raise UsageError("a frequency vector is required (--freq PATH or --probs LIST)")
        return None
    if isinstance(src, dict):
        return FrequencyVector.from_json(src)
    try:
        return load_frequency_vector(src)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read frequency vector {src}: {exc}") from None


# ---------------------------------------------------------------------------

def cmd_analyze(cfg):
    word, x = parse_number_or_word(cfg["x"])
    depth = cfg.get("depth")
    if word is None:
        word = cf_expand(x, depth)
    elif depth is not None:
        word = word[:depth]
    word = as_word(word)
    n = len(word)
    freqs = [
        {"digit": j, "count": c, "frequency": float(r), "exact": str(r)}
        for j in sorted(set(word))
        for c, r in [digit_frequency(word, j)]
    ]
    ranks = [
        {"rank": c.index, "digit": a, "p": c.p, "q": c.q,
         "interval_length": str(interval_length(word[: c.index]))}
        for c, a in zip(convergents(word), word)
    ]
    report = {"input": cfg["x"], "depth": n, "digits": list(word), "frequencies": freqs, "convergents": ranks}
    if cfg["format"] == "json":
        return EXIT_OK, json.dumps(_round_floats(report), indent=2) + "\n"
    out = "# digits," + ",".join(map(str, word)) + "\n"
    out += _csv(["digit", "count", "frequency", "exact"], freqs)
    out += _csv(["rank", "digit", "p", "q", "interval_length"], ranks)
    return EXIT_OK, out


def cmd_dimension(cfg):
    freq = _load_freq(cfg)
    N_list, k_list = _int_list(cfg["N"]), _int_list(cfg["k"])
    if not N_list or not k_list:
        raise UsageError("N and k lists must be nonempty")
    solver = dict(cfg.get("solver") or {})
    solver.setdefault("objective", cfg["objective"])
    options = SolverOptions.from_dict(solver)
    budget = options.budget or DEFAULT_BUDGET
    too_big = [(N, k) for N in N_list for k in k_list if N**k > budget]
    if too_big:
        N, k = too_big[0]
        raise BudgetExceededError(f"N^k = {N}^{k} exceeds the cylinder budget {budget}")
    est = dimension(freq, N_list, k_list, options, jobs=int(cfg["jobs"]))
    if cfg["format"] == "json":
        text = json.dumps(_round_floats(est.to_dict(timing=cfg["timing"])), indent=2) + "\n"
    else:
        text = est.to_csv(timing=cfg["timing"])
    code = EXIT_OK
    for row in est.table:
        status = row["status"] or ""
        if status.startswith("infeasible"):
            code = EXIT_INFEASIBLE
        elif status.startswith("budget"):
            code = EXIT_BUDGET
        elif status.startswith("nonconvergence"):
            code = EXIT_NONCONVERGENCE
        if code:
            break
    return code, text


def _verify_one(args):
    name, trials, seed = args
    return run_suite(name, trials, seed)


def cmd_verify(cfg):
    suite = str(cfg["suite"])
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    trials = cfg.get("trials")
    trials = None if trials is None else int(trials)
    jobs = int(cfg["jobs"])
    work = [(name, trials, int(cfg["seed"])) for name in names]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_one, work))
    else:
        reports = [_verify_one(w) for w in work]
    if cfg["format"] == "json":
        data = [{"suite": r.suite, "passed": r.passed, "checks": r.checks, "failures": r.failures} for r in reports]
        text = json.dumps(data, indent=2) + "\n"
    else:
        lines = []
        for r in reports:
            lines.append(r.summary())
            lines += [f"  counterexample: {f}" for f in r.failures]
        text = "\n".join(lines) + "\n"
    return (EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL), text


def _growth(cfg):
    name = cfg.get("growth", "identity")
    if name == "identity":
        return GrowthSequence()
    raise UsageError(f"unknown growth rule {name!r}; only 'identity' (c_n = n) is built in")


def cmd_sample(cfg):
    if cfg.get("profile"):
        return cmd_profile(cfg)
    freq = _load_freq(cfg)
    n, count, seed = int(cfg["n"]), int(cfg["count"]), int(cfg["seed"])
    growth = _growth(cfg)
    words = [seed_point(freq, growth, n, seed=seed + i) for i in range(count)]
    body = "".join(",".join(map(str, w)) + "\n" for w in words)
    digits = sorted({a for w in words for a in w})[:20]
    summary = [
        {"word": i, "digit": j, "frequency": w.count(j) / n, "target": freq.pmf(j)}
        for i, w in enumerate(words) for j in digits
    ]
    if cfg["format"] == "json":
        text = json.dumps(_round_floats({"words": [list(w) for w in words], "summary": summary})) + "\n"
        return EXIT_OK, text
    if cfg.get("out"):
        # words go to the file, the frequency summary to stdout
        return EXIT_OK, (body, _csv(["word", "digit", "frequency", "target"], summary))
    return EXIT_OK, body + _csv(["word", "digit", "frequency", "target"], summary)


def cmd_profile(cfg):
    if (cfg.get("b") is None) == (cfg.get("log_b") is None):
        raise UsageError("give exactly one of --b and --log-b")
    freq = _load_freq(cfg, required=False) or FrequencyVector.from_sequence([1.0])
    depth = int(cfg.get("depth") or 100)
    count, seed = int(cfg["count"]), int(cfg["seed"])
    b = None if cfg.get("b") is None else float(cfg["b"])
    log_b = None if cfg.get("log_b") is None else float(cfg["log_b"])
    rows = []
    for i in range(count):
        z = seed_point(freq, GrowthSequence(), depth + 1, seed=seed + i)
        params = FzParameters(z, b=b, log_b=log_b)
        x = fz_point(params, depth + 1, seed=seed + i)
        for row in local_dimension_profile(x, log_b=params.log_b, depths=range(1, depth + 1)):
            rows.append({"word": i, **row})
    columns = ("word",) + PROFILE_COLUMNS
    if cfg["format"] == "json":
        return EXIT_OK, json.dumps(_round_floats(rows)) + "\n"
    return EXIT_OK, _csv(columns, rows)


COMMANDS = {"analyze": cmd_analyze, "dimension": cmd_dimension, "verify": cmd_verify,
            "sample": cmd_sample, "profile": cmd_profile}


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON file with option values")
    shared.add_argument("--seed", type=int, help="RNG seed (unsigned 64-bit)")
    shared.add_argument("--out", help="write output here instead of stdout")
    shared.add_argument("--format", choices=("csv", "json"))
    shared.add_argument("--jobs", type=int, help="worker processes")

    parser = argparse.ArgumentParser(prog="cfdim", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"cfdim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[shared], help="digits, frequencies and convergents of a number")
    p.add_argument("x", help="rational (3/7, 0.625) or digit list (1,2,1)")
    p.add_argument("--depth", type=int)

    p = sub.add_parser("dimension", parents=[shared], help="tabulate alpha_{N,k} and the dimension estimate")
    p.add_argument("--freq", help="frequency vector JSON")
    p.add_argument("--probs", help="finite frequency vector p_1,p_2,...")
    p.add_argument("--N", help="alphabet bounds, e.g. 5,10,20")
    p.add_argument("--k", help="cylinder depths, e.g. 1,2")
    p.add_argument("--objective", choices=("block", "rate"))
    p.add_argument("--timing", action="store_true", default=None, help="fill the wall_time column")

    p = sub.add_parser("verify", parents=[shared], help="run lemma check suites")
    p.add_argument("--suite", help=f"one of {', '.join(SUITES)}, all")
    p.add_argument("--trials", type=int)

    for name, text in (("sample", "seed-point words"), ("profile", "local-dimension profiles of F_z(b) points")):
        p = sub.add_parser(name, parents=[shared], help=text)
        p.add_argument("--freq")
        p.add_argument("--probs")
        p.add_argument("--n", type=int, help="word length")
        p.add_argument("--count", type=int, help="number of words")
        p.add_argument("--growth", help="growth rule for c_n (identity)")
        p.add_argument("--b", type=float)
        p.add_argument("--log-b", dest="log_b", type=float)
        p.add_argument("--depth", type=int, help="largest depth m for profiles")
        if name == "sample":
            p.add_argument("--profile", action="store_true", default=None, help="emit F_z(b) profiles instead")
    return parser


def _merge(args):
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                cfg.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
    cfg.update({k: v for k, v in vars(args).items() if v is not None and k != "config"})
    return cfg


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = _merge(args)
        code, text = COMMANDS[args.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except InfeasibleError as exc:
        sys.stderr.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except BudgetExceededError as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except ConvergenceError as exc:
        sys.stderr.write(f"no convergence: {exc}\n")
        return EXIT_NONCONVERGENCE
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    if isinstance(text, tuple):
        body, summary = text
        _emit(body, cfg.get("out"))
        sys.stdout.write(summary)
    else:
        _emit(text, cfg.get("out"))
    return code


if __name__ == "__main__":
    sys.exit(main())
