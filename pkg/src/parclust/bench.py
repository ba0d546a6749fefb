"""Benchmark harness: configuration files, Cartesian parameter grids, run
execution with rounds and cooperative timeouts, and CSV/JSON outputs."""

import csv
import hashlib
import itertools
import json
import multiprocessing
import os
import time
from dataclasses import dataclass, field

from . import io as gio
from .datasets import load_communities
from .metrics import MetricsError, evaluate
from .unweighted import (LabelPropParams, LDDParams, ScanParams, SlpaParams,
                         TectonicParams, cluster_kcore, cluster_label_prop,
                         cluster_ldd, cluster_scan, cluster_slpa,
                         cluster_tectonic)
from .weighted import (AffinityParams, ClusterTimeout, LambdaCCParams,
                       ParHACParams, cluster_affinity, cluster_connectivity,
                       cluster_correlation, cluster_modularity, cluster_parhac)


class ConfigError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


# ---------------------------------------------------------------------------
# clusterer registry
# ---------------------------------------------------------------------------

@dataclass
class RunContext:
    threads: int = 1
    deterministic: bool = False
    seed: int = 0
    deadline: float = None


def _seeded(params, ctx):
    return int(params.get("seed", ctx.seed))


def _run_parhac(g, params, ctx):
    p = ParHACParams(epsilon=float(params.get("epsilon", 0.1)),
                     weight_threshold=float(params.get("weight_threshold", 0.0)),
                     seed=_seeded(params, ctx))
    c, _ = cluster_parhac(g, p, num_threads=ctx.threads,
                          deterministic=ctx.deterministic, deadline=ctx.deadline)
    return c


def _run_affinity(g, params, ctx):
    p = AffinityParams(num_rounds=int(params.get("num_rounds", 50)),
                       initial_threshold=float(params.get("initial_threshold", 0.0)),
                       decay=float(params.get("decay", 1.0)),
                       linkage=str(params.get("linkage", "average")))
    c, _ = cluster_affinity(g, p, num_threads=ctx.threads,
                            deterministic=ctx.deterministic, deadline=ctx.deadline)
    return c


def _run_correlation(g, params, ctx):
    p = LambdaCCParams(resolution=float(params.get("resolution", 0.0)),
                       vertex_weight_mode=str(params.get("vertex_weight_mode", "unit")),
                       max_rounds=int(params.get("max_rounds", 20)),
                       seed=_seeded(params, ctx))
    return cluster_correlation(g, p, num_threads=ctx.threads,
                               deterministic=ctx.deterministic, deadline=ctx.deadline)


def _run_modularity(g, params, ctx):
    return cluster_modularity(g, gamma=float(params.get("gamma", 1.0)),
                              max_rounds=int(params.get("max_rounds", 20)),
                              seed=_seeded(params, ctx), num_threads=ctx.threads,
                              deterministic=ctx.deterministic, deadline=ctx.deadline)


def _run_connectivity(g, params, ctx):
    return cluster_connectivity(g, float(params.get("threshold", 0.0)),
                                num_threads=ctx.threads)


def _run_kcore(g, params, ctx):
    return cluster_kcore(g, int(params.get("k", 2)), num_threads=ctx.threads)


def _run_ldd(g, params, ctx):
    p = LDDParams(beta=float(params.get("beta", 0.1)), seed=_seeded(params, ctx))
    return cluster_ldd(g, p, num_threads=ctx.threads)


def _run_scan(g, params, ctx):
    p = ScanParams(epsilon_sim=float(params.get("epsilon_sim", 0.6)),
                   mu=int(params.get("mu", 2)))
    return cluster_scan(g, p, num_threads=ctx.threads)


def _run_tectonic(g, params, ctx):
    p = TectonicParams(theta=float(params.get("theta", 0.0)))
    return cluster_tectonic(g, p, num_threads=ctx.threads)


def _run_label_prop(g, params, ctx):
    p = LabelPropParams(max_iters=int(params.get("max_iters", 100)),
                        seed=_seeded(params, ctx),
                        mode=str(params.get("mode", "async_parallel")))
    return cluster_label_prop(g, p, num_threads=ctx.threads,
                              deterministic=ctx.deterministic, deadline=ctx.deadline)


def _run_slpa(g, params, ctx):
    p = SlpaParams(rounds=int(params.get("rounds", 20)),
                   freq_threshold=float(params.get("freq_threshold", 0.3)),
                   seed=_seeded(params, ctx))
    return cluster_slpa(g, p, num_threads=ctx.threads,
                        deterministic=ctx.deterministic, deadline=ctx.deadline)


CLUSTERERS = {
    "ParHacClusterer": (_run_parhac, {"epsilon", "weight_threshold", "seed"}),
    "AffinityClusterer": (_run_affinity,
                          {"num_rounds", "initial_threshold", "decay", "linkage"}),
    "CorrelationClusterer": (_run_correlation,
                             {"resolution", "vertex_weight_mode", "max_rounds", "seed"}),
    "ModularityClusterer": (_run_modularity, {"gamma", "max_rounds", "seed"}),
    "ConnectivityClusterer": (_run_connectivity, {"threshold"}),
    "KCoreClusterer": (_run_kcore, {"k"}),
    "LDDClusterer": (_run_ldd, {"beta", "seed"}),
    "ScanClusterer": (_run_scan, {"epsilon_sim", "mu"}),
    "TectonicClusterer": (_run_tectonic, {"theta"}),
    "LabelPropagationClusterer": (_run_label_prop, {"max_iters", "seed", "mode"}),
    "SLPAClusterer": (_run_slpa, {"rounds", "freq_threshold", "seed"}),
}

# Names from other systems parse fine for config fidelity but execute with
# status=error since no database/library backends are driven here.
EXTERNAL_BACKEND_PREFIXES = ("TigerGraph", "Neo4j", "NetworKit", "Snap")


def is_external_backend(name):
    return name.startswith(EXTERNAL_BACKEND_PREFIXES)


def known_clusterer(name):
    return name in CLUSTERERS or is_external_backend(name)


# ---------------------------------------------------------------------------
# configuration files
# ---------------------------------------------------------------------------

@dataclass
class BenchConfig:
    input_directory: str = "."
    output_directory: str = "."
    csv_output_directory: str = "."
    clusterers: list = field(default_factory=list)
    graphs: list = field(default_factory=list)
    gbbs_format: bool = False
    weighted: bool = False
    num_threads: int = 1
    num_rounds: int = 1
    timeout_s: float = None
    grids: dict = field(default_factory=dict)  # clusterer -> {param: [values]}


@dataclass
class StatsConfig:
    input_communities: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    f_score_param: float = 0.5
    resolution: float = 0.0
    gamma: float = 1.0


STAT_FLAGS = ("compute_precision_recall", "compute_edge_density",
              "compute_triangle_density", "compute_ari", "compute_nmi",
              "compute_correlation_objective", "compute_modularity",
              "compute_cluster_stats", "compute_diameter")

STAT_PARAMS = ("f_score_param", "resolution", "gamma")

FLAG_COLUMNS = {
    "compute_precision_recall": ("precision", "recall", "f_score"),
    "compute_edge_density": ("weighted_edge_density",),
    "compute_triangle_density": ("triangle_density",),
    "compute_ari": ("ari",),
    "compute_nmi": ("nmi",),
    "compute_correlation_objective": ("correlation_objective",),
    "compute_modularity": ("modularity",),
    "compute_cluster_stats": ("cluster_count", "cluster_size_min",
                              "cluster_size_max", "cluster_size_mean"),
    "compute_diameter": ("diameter_min", "diameter_max", "diameter_mean"),
}

REPORT_FIELD_FOR_COLUMN = {
    "precision": "precision",
    "recall": "recall",
    "f_score": "f_beta",
    "weighted_edge_density": "weighted_edge_density",
    "triangle_density": "triangle_density",
    "ari": "ari",
    "nmi": "nmi",
    "correlation_objective": "lambda_cc_score",
    "modularity": "modularity_score",
    "cluster_count": "cluster_count",
    "cluster_size_min": "cluster_size_min",
    "cluster_size_max": "cluster_size_max",
    "cluster_size_mean": "cluster_size_mean",
    "diameter_min": "diameter_min",
    "diameter_max": "diameter_max",
    "diameter_mean": "diameter_mean",
}


def _parse_scalar(tok):
    t = tok.strip()
    if t.lower() == "true":
        return True
    if t.lower() == "false":
        return False
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        pass
    return t


def _parse_list(value):
    return [_parse_scalar(t) for t in value.split(";") if t.strip()]


def parse_duration(value, path="<config>", lineno=0):
    v = value.strip()
    mult = 1.0
    if v and v[-1] in "smh":
        mult = {"s": 1.0, "m": 60.0, "h": 3600.0}[v[-1]]
        v = v[:-1]
    try:
        return float(v) * mult
    except ValueError:
        raise ConfigError(path, lineno, f"bad duration {value!r}") from None


_TOP_KEYS = {
    "Input directory": ("input_directory", str),
    "Output directory": ("output_directory", str),
    "CSV output directory": ("csv_output_directory", str),
    "Clusterers": ("clusterers", "list"),
    "Graphs": ("graphs", "list"),
    "GBBS format": ("gbbs_format", "bool"),
    "Weighted": ("weighted", "bool"),
    "Number of threads": ("num_threads", int),
    "Number of rounds": ("num_rounds", int),
    "Timeout": ("timeout_s", "duration"),
}


def parse_bench_config(path):
    """Parse a clustering configuration file.

    Grammar: top-level `Key: value` lines; per-clusterer blocks introduced by
    `<Name>:` followed by a two-space-indented `config:` line and four-space
    indented `key: v1; v2` lines whose semicolon lists become the parameter
    grid.
    """
    cfg = BenchConfig()
    current = None
    in_config = False
    saw_clusterers = False
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.strip().startswith("#"):
                continue
            indent = len(line) - len(line.lstrip(" "))
            if indent == 0:
                current = None
                in_config = False
                if ":" not in line:
                    raise ConfigError(path, lineno, "expected `Key: value`")
                key, _, value = line.partition(":")
                key = key.strip()
                value = value.strip()
                if key in _TOP_KEYS:
                    attr, kind = _TOP_KEYS[key]
                    if kind == "list":
                        setattr(cfg, attr, [t.strip() for t in value.split(";") if t.strip()])
                        if attr == "clusterers":
                            saw_clusterers = True
                    elif kind == "bool":
                        v = _parse_scalar(value)
                        if not isinstance(v, bool):
                            raise ConfigError(path, lineno, f"{key} must be true/false")
                        setattr(cfg, attr, v)
                    elif kind == "duration":
                        setattr(cfg, attr, parse_duration(value, path, lineno))
                    else:
                        try:
                            setattr(cfg, attr, kind(value))
                        except ValueError:
                            raise ConfigError(path, lineno,
                                              f"bad value for {key}: {value!r}") from None
                elif value == "":
                    name = key
                    if not known_clusterer(name):
                        raise ConfigError(path, lineno, f"unknown clusterer {name!r}")
                    current = name
                    cfg.grids.setdefault(name, {})
                else:
                    raise ConfigError(path, lineno, f"unknown top-level key {key!r}")
            elif indent == 2:
                if current is None or line.strip() != "config:":
                    raise ConfigError(path, lineno, "expected `  config:` inside a clusterer block")
                in_config = True
            elif indent == 4:
                if not in_config:
                    raise ConfigError(path, lineno, "parameter line outside a config block")
                key, sep, value = line.strip().partition(":")
                if not sep:
                    raise ConfigError(path, lineno, "expected `key: values`")
                key = key.strip()
                if current in CLUSTERERS and key not in CLUSTERERS[current][1]:
                    raise ConfigError(path, lineno,
                                      f"parameter {key!r} is not valid for {current}")
                values = _parse_list(value)
                if not values:
                    raise ConfigError(path, lineno, f"no values given for {key!r}")
                cfg.grids[current][key] = values
            else:
                raise ConfigError(path, lineno, f"unexpected indentation {indent}")
    if not saw_clusterers:
        raise ConfigError(path, 0, "missing required `Clusterers:` line")
    if not cfg.graphs:
        raise ConfigError(path, 0, "missing required `Graphs:` line")
    if cfg.num_threads < 1:
        raise ConfigError(path, 0, "Number of threads must be >= 1")
    if cfg.num_rounds < 1:
        raise ConfigError(path, 0, "Number of rounds must be >= 1")
    for name in cfg.clusterers:
        if not known_clusterer(name):
            raise ConfigError(path, 0, f"unknown clusterer {name!r}")
    return cfg


def parse_stats_config(path):
    cfg = StatsConfig()
    in_block = False
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.strip().startswith("#"):
                continue
            indent = len(line) - len(line.lstrip(" "))
            if indent == 0:
                in_block = False
                key, sep, value = line.partition(":")
                if not sep:
                    raise ConfigError(path, lineno, "expected `Key: value`")
                key = key.strip()
                value = value.strip()
                if key == "Input communities":
                    cfg.input_communities = [t.strip() for t in value.split(";") if t.strip()]
                elif key == "statistics_config" and value == "":
                    in_block = True
                else:
                    raise ConfigError(path, lineno, f"unknown top-level key {key!r}")
            elif indent == 2:
                if not in_block:
                    raise ConfigError(path, lineno, "flag outside statistics_config")
                key, sep, value = line.strip().partition(":")
                if not sep:
                    raise ConfigError(path, lineno, "expected `key: value`")
                key = key.strip()
                v = _parse_scalar(value.strip())
                if key in STAT_FLAGS:
                    if not isinstance(v, bool):
                        raise ConfigError(path, lineno, f"{key} must be true/false")
                    cfg.flags[key] = v
                elif key in STAT_PARAMS:
                    if isinstance(v, bool) or not isinstance(v, (int, float)):
                        raise ConfigError(path, lineno, f"{key} must be numeric")
                    setattr(cfg, key, float(v))
                else:
                    raise ConfigError(path, lineno, f"unknown statistics key {key!r}")
            else:
                raise ConfigError(path, lineno, f"unexpected indentation {indent}")
    if cfg.f_score_param <= 0:
        raise ConfigError(path, 0, "f_score_param must be > 0")
    for flag in STAT_FLAGS:
        cfg.flags.setdefault(flag, False)
    return cfg


# ---------------------------------------------------------------------------
# grid expansion and execution
# ---------------------------------------------------------------------------

@dataclass
class RunRecord:
    graph: str
    clusterer: str
    params: dict
    round: int
    threads: int = 1
    seconds: float = None
    status: str = "pending"  # ok | timeout | error
    cluster_path: str = None
    metrics: dict = None
    error: str = None


def expand_grid(cfg):
    """Deterministic run order: graphs x clusterers x lexicographic parameter
    combinations x rounds."""
    runs = []
    for graph in cfg.graphs:
        for name in cfg.clusterers:
            grid = cfg.grids.get(name, {})
            keys = sorted(grid)
            combos = [dict(zip(keys, vals))
                      for vals in itertools.product(*(grid[k] for k in keys))]
            if not combos:
                combos = [{}]
            for params in combos:
                for rnd in range(cfg.num_rounds):
                    runs.append(RunRecord(graph=graph, clusterer=name,
                                          params=params, round=rnd,
                                          threads=cfg.num_threads))
    return runs


def param_hash(params):
    blob = json.dumps(sorted(params.items()), default=str).encode()
    return hashlib.sha1(blob).hexdigest()[:12]


def _cluster_filename(rec):
    return f"{rec.graph}.{rec.clusterer}.{param_hash(rec.params)}.{rec.round}.cluster"


def _subprocess_worker(queue, graph_path, weighted, binary, name, params, ctx, out_path):
    try:
        g = gio.load_graph(graph_path, weighted=weighted, binary=binary)
        runner = CLUSTERERS[name][0]
        t0 = time.perf_counter()
        clustering = runner(g, params, ctx)
        dt = time.perf_counter() - t0
        gio.save_clustering(clustering, out_path)
        queue.put(("ok", dt))
    except ClusterTimeout:
        queue.put(("timeout", None))
    except Exception as exc:  # noqa: BLE001 - reported to the parent
        queue.put(("error", f"{type(exc).__name__}: {exc}"))


def execute(cfg, stats=None, deterministic=False, seed=0, parallel_runs=1,
            subprocess_mode=False, progress=None):
    """Run the whole grid; per-run failures are recorded, never fatal.

    Graphs are loaded once and shared; wall-clock time covers clustering
    only. Timeouts are cooperative (checked at algorithm round boundaries)
    unless subprocess_mode forces hard kills. Returns the RunRecord list
    after writing cluster files, per-run metrics JSON, and the times/metrics
    CSVs.
    """
    os.makedirs(cfg.output_directory, exist_ok=True)
    os.makedirs(cfg.csv_output_directory, exist_ok=True)
    runs = expand_grid(cfg)

    graphs = {}
    graph_errors = {}
    for gname in cfg.graphs:
        path = os.path.join(cfg.input_directory, gname)
        try:
            graphs[gname] = gio.load_graph(path, weighted=cfg.weighted,
                                           binary=cfg.gbbs_format)
        except Exception as exc:  # noqa: BLE001 - skip runs for this graph
            graph_errors[gname] = f"{type(exc).__name__}: {exc}"

    gt_for_graph = {}
    if stats is not None:
        for i, gname in enumerate(cfg.graphs):
            if i < len(stats.input_communities):
                cpath = os.path.join(cfg.input_directory, stats.input_communities[i])
                try:
                    gt_for_graph[gname] = load_communities(cpath)
                except Exception as exc:  # noqa: BLE001
                    gt_for_graph[gname] = exc

    def run_one(rec):
        if rec.graph in graph_errors:
            rec.status = "error"
            rec.error = graph_errors[rec.graph]
            return rec
        if is_external_backend(rec.clusterer):
            rec.status = "error"
            rec.error = "backend not supported"
            return rec
        g = graphs[rec.graph]
        ctx = RunContext(threads=cfg.num_threads, deterministic=deterministic,
                         seed=seed)
        out_path = os.path.join(cfg.output_directory, _cluster_filename(rec))
        if cfg.timeout_s is not None:
            ctx.deadline = time.monotonic() + cfg.timeout_s
        try:
            if subprocess_mode:
                mp = multiprocessing.get_context("fork")
                q = mp.Queue()
                proc = mp.Process(target=_subprocess_worker,
                                  args=(q, os.path.join(cfg.input_directory, rec.graph),
                                        cfg.weighted, cfg.gbbs_format, rec.clusterer,
                                        rec.params, ctx, out_path))
                proc.start()
                proc.join(cfg.timeout_s)
                if proc.is_alive():
                    proc.terminate()
                    proc.join()
                    rec.status = "timeout"
                    return rec
                status, payload = q.get_nowait()
                if status == "ok":
                    rec.status = "ok"
                    rec.seconds = payload
                    rec.cluster_path = out_path
                elif status == "timeout":
                    rec.status = "timeout"
                else:
                    rec.status = "error"
                    rec.error = payload
                    return rec
            else:
                runner = CLUSTERERS[rec.clusterer][0]
                t0 = time.perf_counter()
                clustering = runner(g, rec.params, ctx)
                rec.seconds = time.perf_counter() - t0
                gio.save_clustering(clustering, out_path)
                rec.status = "ok"
                rec.cluster_path = out_path
        except ClusterTimeout:
            rec.status = "timeout"
            return rec
        except Exception as exc:  # noqa: BLE001 - recorded, batch continues
            rec.status = "error"
            rec.error = f"{type(exc).__name__}: {exc}"
            return rec

        if stats is not None and rec.status == "ok":
            try:
                clustering = gio.load_clustering(out_path, n=g.n) \
                    if subprocess_mode else clustering
                gt = gt_for_graph.get(rec.graph)
                if isinstance(gt, Exception):
                    raise MetricsError(f"communities unavailable: {gt}")
                rep = evaluate(
                    g, clustering, gt=gt,
                    beta=stats.f_score_param,
                    resolution=stats.resolution, gamma=stats.gamma,
                    num_threads=cfg.num_threads,
                    **{flag: stats.flags.get(flag, False) for flag in STAT_FLAGS})
                rec.metrics = rep.to_dict()
                json_path = out_path[:-len(".cluster")] + ".metrics.json"
                gio.atomic_write_text(json_path, json.dumps(rec.metrics, indent=2,
                                                            sort_keys=True) + "\n")
            except Exception as exc:  # noqa: BLE001
                rec.error = f"metrics: {type(exc).__name__}: {exc}"
        return rec

    if parallel_runs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=parallel_runs) as pool:
            list(pool.map(run_one, runs))
    else:
        for rec in runs:
            run_one(rec)
            if progress is not None:
                progress(rec)

    write_times_csv(os.path.join(cfg.csv_output_directory, "times.csv"), runs)
    if stats is not None:
        write_metrics_csv(os.path.join(cfg.csv_output_directory, "metrics.csv"),
                          runs, stats)
    return runs


BASE_COLUMNS = ("graph", "clusterer", "params_json", "round", "threads",
                "cluster_time_s", "status")


def _base_row(rec):
    return {
        "graph": rec.graph,
        "clusterer": rec.clusterer,
        "params_json": json.dumps(rec.params, sort_keys=True),
        "round": rec.round,
        "threads": rec.threads,
        "cluster_time_s": "" if rec.seconds is None else f"{rec.seconds:.6f}",
        "status": rec.status,
    }


def write_times_csv(path, runs):
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=BASE_COLUMNS)
        w.writeheader()
        for rec in runs:
            w.writerow(_base_row(rec))
    os.replace(tmp, path)


def metric_columns(stats):
    cols = []
    for flag in STAT_FLAGS:
        if stats.flags.get(flag, False):
            cols.extend(FLAG_COLUMNS[flag])
    return cols


def write_metrics_csv(path, runs, stats):
    cols = metric_columns(stats)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(BASE_COLUMNS) + cols)
        w.writeheader()
        for rec in runs:
            row = _base_row(rec)
            for col in cols:
                val = None
                if rec.metrics is not None:
                    val = rec.metrics.get(REPORT_FIELD_FOR_COLUMN[col])
                row[col] = "" if val is None else val
            w.writerow(row)
    os.replace(tmp, path)
