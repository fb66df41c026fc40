import csv
import itertools
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from tqdm import tqdm

from cyclecover import oracle
from cyclecover.config import settings
from cyclecover.core import is_r_local, verify_partition
from cyclecover.errors import BudgetExceeded, CycleCoverError
from cyclecover.formats import read_instance, write_instance
from cyclecover.instances import (
    gen_fano_config,
    gen_mean_instance,
    gen_random_local,
    gen_tri_config,
    gen_triangle_cycle,
)
from cyclecover.schemas import EdgeColouring, OracleBudget, PipelineParams, VerifyOptions
from cyclecover.solvers import r_local_partition, two_local_partition, two_mean_partition

from .checks import LEMMA_CHECKS
from .schemas import ExperimentConfig, ExperimentRow, ExperimentSummary, RamseyProbeResult

logger = logging.getLogger(__name__)

ROW_FIELDS = list(ExperimentRow.model_fields)


# -------------------------------------------------------------
# per-instance work (top level so worker processes can import it)
# -------------------------------------------------------------
def _build_instance(task: Dict[str, Any]) -> EdgeColouring:
    family, n, seed = task["family"], task["n"], task["seed"]
    if family == "random-local":
        return gen_random_local(n, task["r"], task["s"], seed)
    if family == "tri-sweep":
        c, _ = gen_tri_config(task["sizes"], "random", seed)
        return c
    if family == "mean":
        return gen_mean_instance(max(4, n), seed)
    if family == "triangle-cycle":
        c, _ = gen_triangle_cycle(max(3, n // 2), 0, 1)
        return c
    part_rng = random.Random(seed)
    return gen_fano_config([part_rng.randint(1, 2) for _ in range(7)], seed)


def _run_instance(task: Dict[str, Any]) -> Dict[str, Any]:
    row = ExperimentRow(
        index=task["index"], family=task["family"], seed=task["seed"], n=task["n"], r=task["r"], solver=task["solver"]
    )
    try:
        if task["solver"] == "lemma":
            LEMMA_CHECKS[task["family"]](task, row)
            return row.model_dump()
        c = _build_instance(task)
        row.n = c.n
        if task["solver"] == "two-local":
            p, trace = two_local_partition(c)
        elif task["solver"] == "mean":
            p, trace = two_mean_partition(c)
        else:
            p, trace = r_local_partition(c, task["r"])
        pair = task["solver"] != "r-local"
        opts = VerifyOptions(require_distinct_colours=pair, max_cycles=2 if pair else None)
        report = verify_partition(c, p, opts)
        row.cycles, row.nonempty, row.valid = report.cycle_count, report.nonempty_count, report.valid
        row.trace = trace.summary()
        if not report.valid:
            row.error = report.failure_reason
        if not pair:
            params = PipelineParams()
            completed = trace.fallbacks == 0
            row.bound = params.cycle_bound(task["r"]) if completed else params.fallback_bound(c.n, task["r"])
            if report.cycle_count > row.bound:
                row.valid, row.error = False, f"{report.cycle_count} cycles above the bound {row.bound}"
        if task["oracle"]:
            row.oracle_min, _ = oracle.min_cycle_partition(c)
            if pair and row.oracle_min > 2:
                row.valid, row.error = False, f"oracle minimum {row.oracle_min} > 2"
    except CycleCoverError as e:
        row.valid, row.error = False, f"{type(e).__name__}: {e}"
    return row.model_dump()


class ExperimentHandlers:
    """
    Runs the seeded campaigns behind the `experiment`, `ramsey-probe` and
    `seed-search` commands and writes their reports under ``report_dir``.
    """

    def __init__(self, report_dir: Optional[str] = None, budget: Optional[OracleBudget] = None, progress: bool = True):
        self.report_dir = Path(report_dir or settings.REPORT_DIR)
        self.budget = budget or OracleBudget.default()
        self.progress = progress

    def _progress(self, items: Iterable, total: int, desc: str) -> Iterable:
        return tqdm(items, total=total, desc=desc, disable=not self.progress)

    # -------------------------------------------------------------
    # 🔥 EXPERIMENT CAMPAIGN
    # -------------------------------------------------------------
    def tasks(self, cfg: ExperimentConfig) -> List[Dict[str, Any]]:
        rng = random.Random(cfg.seed)
        base = {"family": cfg.family, "solver": cfg.solver, "r": cfg.r, "s": cfg.s, "oracle": "oracle" in cfg.checks}
        if cfg.family == "tri-sweep":
            sizes = itertools.product(range(1, cfg.sweep_max + 1), repeat=3)
            return [
                {**base, "index": i, "sizes": list(abc), "n": sum(abc), "seed": rng.getrandbits(63)}
                for i, abc in enumerate(sizes)
            ]
        if cfg.family == "merge-bip":
            # every prefix pair P_A = a[:i], P_B = b[:j] on |a|, |b| <= sweep_max
            cases = [
                (na, nb, i, j)
                for na, nb in itertools.product(range(1, cfg.sweep_max + 1), repeat=2)
                for i in range(1, na + 1)
                for j in range(1, nb + 1)
            ]
            return [
                {**base, "index": k, "sizes": list(case), "n": case[0] + case[1], "seed": rng.getrandbits(63)}
                for k, case in enumerate(cases)
            ]
        out = []
        for i in range(cfg.count):
            n = rng.randint(cfg.n_min, cfg.n_max)
            out.append({**base, "index": i, "n": n, "seed": rng.getrandbits(63)})
        return out

    def run_experiment(self, cfg: ExperimentConfig) -> ExperimentSummary:
        tasks = self.tasks(cfg)
        output = Path(cfg.output) if cfg.output else self.report_dir / f"{cfg.family}_{cfg.solver}_{cfg.seed}.csv"
        logger.info(f"Running {len(tasks)} {cfg.family} instances with solver {cfg.solver}")

        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                rows = list(self._progress(pool.map(_run_instance, tasks), len(tasks), cfg.family))
        else:
            rows = [_run_instance(t) for t in self._progress(tasks, len(tasks), cfg.family)]

        failures = [row for row in rows if not row["valid"]]
        counts = [row["cycles"] for row in rows if row["cycles"] is not None]
        minima = [row["oracle_min"] for row in rows if row["oracle_min"] is not None]
        summary = ExperimentSummary(
            output=str(output),
            instances=len(rows),
            failures=len(failures),
            max_cycles=max(counts, default=0),
            mean_cycles=sum(counts) / len(counts) if counts else 0.0,
            max_oracle_min=max(minima) if minima else None,
        )
        self._write_report(output, rows, summary)
        for row in failures:
            logger.warning(f"✗ instance {row['index']} (seed {row['seed']}): {row['error']}")
        marker = "✓" if not failures else "✗"
        logger.info(f"{marker} {summary.instances} instances, {summary.failures} failures -> {output}")
        return summary

    @staticmethod
    def _write_report(path: Path, rows: List[Dict[str, Any]], summary: ExperimentSummary) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=ROW_FIELDS, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
            for key, value in summary.model_dump(exclude={"output"}).items():
                if isinstance(value, float):
                    value = f"{value:.4f}"
                fh.write(f"# {key}: {value}\n")

    # -------------------------------------------------------------
    # 🔥 LONG-CYCLE RAMSEY PROBE
    # -------------------------------------------------------------
    def ramsey_probe(
        self, r: int, l: int, n: int, samples: int, seed: int = 0, s: Optional[int] = None
    ) -> RamseyProbeResult:
        """Sample r-local colourings of K_n and check each has a monochromatic cycle of length >= l."""
        if n > self.budget.effective_max_n:
            raise BudgetExceeded(f"n={n} exceeds oracle cap {self.budget.effective_max_n}")
        warning = n < 2 * l * r
        if warning:
            logger.warning(f"n={n} is below 2*l*r={2 * l * r}; a miss proves nothing")
        s = s or 2 * r
        rng = random.Random(seed)
        shortest = n
        saved: List[str] = []
        for _ in self._progress(range(samples), samples, "ramsey"):
            sample_seed = rng.getrandbits(63)
            c = gen_random_local(n, r, s, sample_seed)
            length, _ = oracle.longest_mono_cycle(c, self.budget)
            shortest = min(shortest, length)
            if length < l:
                path = self.report_dir / f"ramsey_miss_r{r}_l{l}_n{n}_{sample_seed}.txt"
                write_instance(path, c, [f"longest monochromatic cycle {length} < {l}", f"seed {sample_seed}"])
                saved.append(str(path))
                logger.warning(f"✗ sample {sample_seed}: longest monochromatic cycle {length} < {l}, saved {path}")
        result = RamseyProbeResult(
            r=r,
            l=l,
            n=n,
            samples=samples,
            all_found=not saved,
            min_cycle_len_observed=shortest if samples else 0,
            warning=warning,
            saved=saved,
        )
        logger.info(f"{'✓' if result.all_found else '✗'} ramsey probe r={r} l={l} n={n}: shortest {shortest}")
        return result

    # -------------------------------------------------------------
    # 🔥 ROBUST SEED SEARCH
    # -------------------------------------------------------------
    def _seed_candidates(self, n: int, s: int, r: int, rng: random.Random, attempts: int) -> Iterable[EdgeColouring]:
        pairs = n * (n - 1) // 2
        if s ** pairs <= settings.EXHAUSTIVE_SEED_LIMIT:
            for colours in itertools.product(range(s), repeat=pairs):
                yield EdgeColouring(n=n, colours=colours)
            return
        for _ in range(attempts):
            yield gen_random_local(n, r, s, rng.getrandbits(63))

    def seed_search(
        self, s: int, r: Optional[int] = None, n_max: int = 8, seed: int = 0, attempts: int = 200
    ) -> Optional[EdgeColouring]:
        """First robust colouring with palette size s that is r-local and needs s cycles after any deletion."""
        if n_max > self.budget.effective_max_n:
            raise BudgetExceeded(f"n_max={n_max} exceeds oracle cap {self.budget.effective_max_n}")
        r = r if r is not None else max(1, s - 1)
        rng = random.Random(seed)
        for n in range(2, n_max + 1):
            for c in self._seed_candidates(n, s, r, rng, attempts):
                if c.palette != frozenset(range(s)) or not is_r_local(c, r):
                    continue
                if not oracle.robustness_check(c, s, self.budget):
                    continue
                path = self.report_dir / f"seed_s{s}_r{r}_n{n}.txt"
                write_instance(path, c, [f"robust seed: s={s}, r={r}"])
                if not oracle.robustness_check(read_instance(path), s, self.budget):
                    raise CycleCoverError(f"saved seed {path} failed re-verification")
                logger.warning(f"✓ robust seed found at n={n}, saved {path}")
                return c
            logger.debug(f"no robust seed with s={s}, r={r} at n={n}")
        logger.info(f"✗ no robust seed with s={s}, r={r} up to n={n_max}")
        return None
