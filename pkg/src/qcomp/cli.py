"""Command-line driver: one subcommand per demonstration.

Exit codes: 0 success, 1 domain/parse error, 2 usage error.  Bitstrings
given with --input list qubit 0 first.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import algorithms, bb84, circuit, gates, infotheory, noise
from .errors import DomainError, ParseError, ResourceError
from .qstate import (
    StateVector,
    basis_state,
    bits_to_index,
    index_to_bits,
    make_rng,
    measure_all,
    random_state,
    reduced_density,
    to_density,
)

DEFAULT_SEED = 20240601
DEFAULT_SWEEP = (0.01, 0.05, 0.1, 0.2, 0.3, 0.5)


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _bits(text: str) -> tuple[int, ...]:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"expected a bitstring of 0/1, got {text!r}")
    return tuple(int(c) for c in text)


def _qubit_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated qubit indices, got {text!r}") from None


def _bitstr(bits) -> str:
    return "".join(str(b) for b in bits)


def _load_circuit(path: str) -> circuit.Circuit:
    text = Path(path).read_text(encoding="utf-8")
    return circuit.parse(text)


def _initial_state(n: int, bits) -> StateVector:
    if bits is None:
        return basis_state(n, 0)
    if len(bits) != n:
        raise DomainError(f"--input has {len(bits)} bits but the circuit has {n} qubits")
    return basis_state(n, bits_to_index(bits))


def _format_state(state: StateVector, limit: int = 32) -> list[str]:
    lines = []
    probs = state.probabilities()
    for i in range(state.dim):
        if probs[i] > 1e-12:
            a = state.amplitudes[i]
            lines.append(f"  |{_bitstr(index_to_bits(i, state.num_qubits))}>  "
                         f"{a.real:+.6f}{a.imag:+.6f}j  p={probs[i]:.6f}")
            if len(lines) == limit:
                lines.append("  ...")
                break
    return lines


# --- subcommands ---------------------------------------------------------------

def cmd_run(args):
    c = _load_circuit(args.circuit)
    out = circuit.run(c, _initial_state(c.num_qubits, args.input))
    rec = measure_all(out, args.seed)
    bits = index_to_bits(rec.outcome_index, c.num_qubits)
    result = {
        "state": out.to_json(),
        "measurement": {"index": rec.outcome_index, "bits": _bitstr(bits), "probability": rec.probability},
    }
    text = ["final state (qubit 0 first):", *_format_state(out),
            f"measured: {_bitstr(bits)} (index {rec.outcome_index}, p={rec.probability:.6f})",
            "  " + " ".join(f"q{q}={b}" for q, b in enumerate(bits))]
    return result, text


def cmd_qft(args):
    n = args.n if args.n is not None else 3
    c = algorithms.qft_circuit(n)
    result = {"n": n, "gate_count": len(c), "circuit": circuit.render(c)}
    text = [f"qft on {n} qubits: {len(c)} gates", circuit.render(c).rstrip()]
    if args.input is not None:
        out = circuit.run(c, _initial_state(n, args.input))
        result["state"] = out.to_json()
        text += ["output state:", *_format_state(out)]
    return result, text


def cmd_grover(args):
    n = args.n if args.n is not None else 4
    marked = args.marked if args.marked is not None else 0
    oracle = algorithms.GroverOracle(n, marked)
    iters = algorithms.grover_iterations(1 << n)
    found = algorithms.grover_search(oracle, args.seed)
    p = algorithms.grover_success_probability(oracle, iters)
    result = {"n": n, "marked": marked, "iterations": iters, "success_probability": p, "found": found}
    text = [f"search space N={1 << n}, marked {marked}",
            f"iterations: {iters}", f"success probability: {p:.6f}", f"found: {found}"]
    return result, text


def cmd_teleport(args):
    rng = make_rng(args.seed)
    psi = random_state(1, rng)
    res = algorithms.teleport(psi, rng)
    result = {"psi": psi.to_json(), "bits": list(res.classical_bits),
              "received": res.received.to_json(), "fidelity": res.fidelity}
    a, b = psi.amplitudes
    text = [f"sent      a={a:.6f} b={b:.6f}",
            f"classical bits: {res.classical_bits[0]}{res.classical_bits[1]}",
            f"received  a={res.received.amplitudes[0]:.6f} b={res.received.amplitudes[1]:.6f}",
            f"fidelity: {res.fidelity:.12f}"]
    return result, text


def cmd_densecode(args):
    bits = args.input if args.input is not None else (1, 0)
    if len(bits) != 2:
        raise DomainError("densecode --input takes exactly two bits")
    decoded = algorithms.dense_code(bits, args.seed)
    result = {"sent": _bitstr(bits), "decoded": _bitstr(decoded), "ok": tuple(bits) == decoded}
    return result, [f"sent {_bitstr(bits)} -> decoded {_bitstr(decoded)}"]


def cmd_adder(args):
    if args.input is None:
        cases = [(x, y) for x in (0, 1) for y in (0, 1)]
    else:
        bits = args.input
        if len(bits) == 3 and bits[2] == 0:
            bits = bits[:2]
        if len(bits) != 2:
            raise DomainError("adder --input takes two bits x y (optionally followed by 0)")
        cases = [bits]
    rows = []
    for x, y in cases:
        s, carry = algorithms.half_adder(x, y)
        rows.append({"x": x, "y": y, "sum": s, "carry": carry})
    text = ["x y | sum carry"] + [f"{r['x']} {r['y']} |  {r['sum']}    {r['carry']}" for r in rows]
    return (rows[0] if args.input is not None else rows), text


def cmd_entropy(args):
    try:
        probs = [float(t) for t in args.probs.split(",")]
    except ValueError:
        raise DomainError(f"expected comma-separated probabilities, got {args.probs!r}") from None
    s = infotheory.shannon_entropy(probs)
    result = {"probs": probs, "entropy_bits": s}
    text = [f"S = {s:.12g} bits"]
    if args.n is not None:
        limit = infotheory.compression_limit(probs, args.n)
        result["compression_limit_bits"] = limit
        text.append(f"{args.n} messages compress to {limit:.12g} bits")
    return result, text


def _circuit_output(args):
    c = _load_circuit(args.circuit)
    return circuit.run(c, _initial_state(c.num_qubits, args.input))


def cmd_vn_entropy(args):
    state = _circuit_output(args)
    keep = sorted(set(args.keep)) if args.keep is not None else list(range(state.num_qubits))
    if len(keep) == state.num_qubits:
        rho = to_density(state)
    else:
        rho = reduced_density(state, keep)
    s = infotheory.von_neumann_entropy(rho)
    result = {"keep": keep, "entropy_bits": s}
    return result, [f"S(rho_{{{','.join(map(str, keep))}}}) = {s:.12g} bits"]


def cmd_entangle_entropy(args):
    state = _circuit_output(args)
    if args.keep is None:
        raise DomainError("entangle-entropy needs --keep")
    e = infotheory.entanglement_entropy(state, args.keep)
    result = {"keep": sorted(set(args.keep)), "entanglement_entropy_bits": e}
    return result, [f"E = {e:.12g} bits"]


def cmd_capacity(args):
    p = args.p if args.p is not None else 0.11
    cap = infotheory.bsc_capacity(p)
    return {"p": p, "capacity": cap}, [f"binary symmetric channel p={p}: {cap:.12g} bits per use"]


def cmd_noise_sweep(args):
    ps = [args.p] if args.p is not None else list(DEFAULT_SWEEP)
    trials = args.trials if args.trials is not None else 10_000
    seeds = make_rng(args.seed).integers(0, 1 << 63, size=len(ps))
    rows = []
    for p, s in zip(ps, seeds):
        stats = noise.logical_error_rate(p, trials, int(s))
        rows.append({"p": p, "trials": trials, "logical_rate": stats.logical_rate,
                     "predicted_rate": round(stats.predicted_rate, 12)})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["p", "trials", "logical_rate", "predicted_rate"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return rows, [buf.getvalue().rstrip("\n")]


def cmd_qec_demo(args):
    rng = make_rng(args.seed)
    psi = random_state(1, rng)
    clean = noise.encode_bitflip3(psi)
    rows = []
    cases = [("none", ()), ("X0", (1, 0, 0)), ("X1", (0, 1, 0)), ("X2", (0, 0, 1))]
    if args.p is not None:
        labels = noise.sample_pauli_error(noise.NoiseChannel("bit_flip", args.p), 3, rng)
        cases.append(("sampled " + "".join(labels), tuple(int(lbl == "X") for lbl in labels)))
    for name, flips in cases:
        syndrome, fixed = noise.measure_syndrome(noise.apply_bit_flips(clean, flips), rng)
        fid = abs(complex(clean.amplitudes.conj() @ fixed.amplitudes)) ** 2
        rows.append({"error": name, "syndrome": _bitstr(syndrome), "fidelity": fid})
    text = ["error          syndrome  fidelity"] + [
        f"{r['error']:<14} {r['syndrome']:<9} {r['fidelity']:.12f}" for r in rows]
    return {"cases": rows}, text


def cmd_bb84(args):
    cfg = bb84.Bb84Config(
        raw_length=args.length if args.length is not None else 1024,
        eavesdropper="intercept_resend" if args.eve else "none",
        detection_threshold=args.threshold if args.threshold is not None else 0.12,
        seed=args.seed,
    )
    res = bb84.run_bb84(cfg)
    report = res.to_json(transcript=args.transcript)
    return report, [json.dumps(report)]


def cmd_nocloning(args):
    s = 2 ** -0.5
    plus = StateVector([s, s], 1)
    rng = make_rng(args.seed)
    pairs = [("|0>,|1>", basis_state(1, 0), basis_state(1, 1)),
             ("|0>,|0>", basis_state(1, 0), basis_state(1, 0)),
             ("|0>,|+>", basis_state(1, 0), plus),
             ("random", random_state(1, rng), random_state(1, rng))]
    rows = []
    for name, u, v in pairs:
        rep = gates.verify_no_cloning(u, v)
        dist = bb84.eavesdrop_disturbance_demo(u, v)
        rows.append({"pair": name, "overlap_abs": rep.overlap_abs, "clonable": rep.clonable,
                     "copy_residual": rep.residual, "measurement_fidelity": dist.expected_fidelity})
    text = ["pair       |<u|v>|    clonable  fidelity after measuring v in u's basis"] + [
        f"{r['pair']:<10} {r['overlap_abs']:.6f}  {str(r['clonable']):<9} {r['measurement_fidelity']:.6f}"
        for r in rows]
    return {"pairs": rows}, text


COMMANDS = {
    "run": (cmd_run, "run a circuit file"),
    "qft": (cmd_qft, "build (and optionally run) the quantum Fourier transform"),
    "grover": (cmd_grover, "Grover search for one marked item"),
    "teleport": (cmd_teleport, "teleport a random one-qubit state"),
    "densecode": (cmd_densecode, "send two bits with one qubit of a Bell pair"),
    "adder": (cmd_adder, "reversible half adder truth table"),
    "entropy": (cmd_entropy, "Shannon entropy of a distribution"),
    "vn-entropy": (cmd_vn_entropy, "von Neumann entropy of a circuit's (reduced) output"),
    "entangle-entropy": (cmd_entangle_entropy, "entanglement entropy of a circuit's output"),
    "capacity": (cmd_capacity, "binary symmetric channel capacity"),
    "noise-sweep": (cmd_noise_sweep, "bit-flip code logical error rate vs p, as CSV"),
    "qec-demo": (cmd_qec_demo, "syndrome extraction on each single bit-flip"),
    "bb84": (cmd_bb84, "BB84 key distribution session (JSON report)"),
    "nocloning-demo": (cmd_nocloning, "copy and measurement constraints on state pairs"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED,
                        help=f"RNG seed (default {DEFAULT_SEED})")
    common.add_argument("--json", action="store_true", help="emit a single JSON document")

    parser = argparse.ArgumentParser(prog="qcomp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name in ("run", "vn-entropy", "entangle-entropy"):
            p.add_argument("circuit", help="circuit DSL file")
        if name == "entropy":
            p.add_argument("probs", help="comma-separated probabilities, e.g. 0.5,0.5")
        if name in ("run", "qft", "densecode", "adder", "vn-entropy", "entangle-entropy"):
            p.add_argument("--input", type=_bits, help="input bitstring, qubit 0 first")
        if name in ("qft", "grover", "entropy"):
            p.add_argument("--n", type=int)
        if name == "grover":
            p.add_argument("--marked", type=int)
        if name in ("vn-entropy", "entangle-entropy"):
            p.add_argument("--keep", type=_qubit_list, help="comma-separated qubit indices")
        if name in ("capacity", "noise-sweep", "qec-demo"):
            p.add_argument("--p", type=float)
        if name == "noise-sweep":
            p.add_argument("--trials", type=int)
        if name == "bb84":
            p.add_argument("--length", type=int)
            p.add_argument("--eve", action="store_true", help="insert an intercept-resend eavesdropper")
            p.add_argument("--threshold", type=float)
            p.add_argument("--transcript", action="store_true", help="include per-round records")
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = COMMANDS[args.command][0]
    try:
        result, text = handler(args)
    except (DomainError, ParseError, ResourceError, OSError) as exc:
        print(f"qcomp {args.command}: {exc}", file=stderr)
        return 1
    if args.json or args.command == "bb84":
        print(json.dumps(result), file=stdout)
    else:
        print("\n".join(text), file=stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
