"""Command-line front end.

Exit codes: 0 for success/PASS, 1 for verification failure or invalid input
data, 2 for usage and configuration errors.
"""

from __future__ import annotations

import sys
from fractions import Fraction

import click

from . import aztec as aztec_mod
from . import bijections, generators, refine, report, trees
from .errors import ConfigError, DimerforgeError
from .matchings import (
    Matching,
    count_matchings,
    enumerate_matchings,
    kasteleyn_grid_count,
    squarish,
)
from .planar import check_reflection_symmetry, dump_graph, load_graph


class _Fail(click.ClickException):
    exit_code = 1


class _ConfigFail(click.ClickException):
    exit_code = 2


def _load(path: str, lenient: bool = False):
    try:
        with open(path, encoding="utf-8") as fh:
            return load_graph(fh.read(), name=path,
                              require_connected=not lenient)
    except OSError as exc:
        raise _ConfigFail(str(exc)) from exc


def _directives(path: str) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#!"):
                key, _, value = line[2:].strip().partition(" ")
                out[key] = value.strip()
    return out


def _ids(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _read_matchings(path: str, host) -> list[Matching]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            mu = Matching(host.graph_id, frozenset(_ids(line)))
            mu.cover_map(host)
            out.append(mu)
    return out


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def main():
    try:
        cli(standalone_mode=False)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(2)
    except click.ClickException as exc:
        click.echo(exc.format_message(), err=True)
        sys.exit(exc.exit_code)
    except DimerforgeError as exc:
        click.echo(f"error: {exc.__class__.__name__}: {exc}", err=True)
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(130)


@click.group()
def cli():
    """Exact matching/forest combinatorics on embedded plane graphs."""


@cli.command()
@click.argument("file", type=click.Path())
def validate(file):
    """Validate a graph file (embedding, simplicity, Euler check)."""
    g = _load(file)
    faces = g.trace_faces()
    click.echo(f"OK: V={len(g.vertices)} E={len(g.edges)} F={len(faces.faces)} "
               f"id={g.graph_id}")


@cli.command()
@click.argument("file", type=click.Path())
def faces(file):
    """List the faces of a graph file."""
    g = _load(file)
    for f in g.trace_faces().faces:
        kind = "infinite" if f.infinite else "bounded"
        click.echo(f"face {f.index} {kind}: " + " ".join(map(str, f.vertex_seq)))


@cli.command()
@click.argument("file", type=click.Path())
@click.option("--lenient", "-L", is_flag=True,
              help="admit disconnected graphs (derived graphs may be)")
def count(file, lenient):
    """Weighted perfect matching count of a graph file."""
    click.echo(str(count_matchings(_load(file, lenient))))


@cli.command("enumerate")
@click.argument("file", type=click.Path())
@click.option("--limit", type=int, default=None, help="stop after this many")
@click.option("--lenient", "-L", is_flag=True,
              help="admit disconnected graphs (derived graphs may be)")
def enumerate_cmd(file, limit, lenient):
    """List perfect matchings as sorted edge-id lines."""
    g = _load(file, lenient)
    emitted = 0
    for mu in enumerate_matchings(g):
        click.echo(" ".join(map(str, mu.sorted_edges())))
        emitted += 1
        if limit is not None and emitted >= limit:
            break


@cli.command("grid-count")
@click.argument("m", type=int)
@click.argument("n", type=int)
def grid_count(m, n):
    """Closed-form count for the 2m x 2n grid graph."""
    click.echo(str(kasteleyn_grid_count(m, n)))


@cli.command("squarish")
@click.argument("value", type=int)
def squarish_cmd(value):
    """Classify an integer as square, twice a square, or neither."""
    verdict = squarish(value)
    click.echo(str(verdict))
    if not verdict:
        raise _Fail(f"{value} is not squarish")


@cli.command()
@click.argument("kind", type=click.Choice(["hg", "plus", "minus", "bar", "smash", "trimmed"]))
@click.argument("file", type=click.Path(), required=False)
@click.option("--path", "path_", help="comma-separated boundary path vertex ids")
@click.option("--targets", help="comma-separated vertices to smash")
@click.option("--n", "order", type=int, help="half side for trimmed squares")
@click.option("--removals", help="peaks as 'i,j;i,j;...'")
@click.option("-o", "--out", type=click.Path(), help="output file (default stdout)")
def build(kind, file, path_, targets, order, removals, out):
    """Build a derived graph and write it in the graph-file format."""
    if kind == "trimmed":
        if order is None:
            raise click.UsageError("trimmed needs --n")
        peaks = []
        if removals:
            for part in removals.split(";"):
                i, j = part.split(",")
                peaks.append((int(i), int(j)))
        _emit(dump_graph(refine.trimmed_square(order, peaks)), out)
        return
    if file is None:
        raise click.UsageError(f"{kind} needs a graph file")
    g = _load(file)
    if kind == "smash":
        if not targets:
            raise click.UsageError("smash needs --targets")
        ref = refine.dual_refinement(g)
        smashed = refine.smash_in(ref, _ids(targets))
        _emit(dump_graph(smashed.graph), out)
        return
    if kind == "hg":
        _emit(dump_graph(refine.dual_refinement(g).graph), out)
        return
    if not path_:
        raise click.UsageError(f"{kind} needs --path")
    inst = refine.section_instance(g, _ids(path_))
    if kind == "plus":
        _emit(dump_graph(inst.plus), out)
    elif kind == "minus":
        _emit(dump_graph(inst.minus), out)
    else:
        _emit(dump_graph(refine.symmetrize(inst.refinement, inst.boundary)), out)


@cli.command()
@click.argument("file", type=click.Path())
@click.argument("matchings_file", type=click.Path())
@click.option("--path", "path_", required=True, help="boundary path vertex ids")
@click.option("--inverse", is_flag=True, help="map from the minus side instead")
def phi(file, matchings_file, path_, inverse):
    """Map matchings between the plus and minus graphs (one per line)."""
    inst = refine.section_instance(_load(file), _ids(path_))
    host = inst.minus if inverse else inst.plus
    for mu in _read_matchings(matchings_file, host):
        img = bijections.psi(inst, mu) if inverse else bijections.phi(inst, mu)
        click.echo(" ".join(map(str, img.sorted_edges())))


@cli.command()
@click.argument("direction", type=click.Choice(["t2m", "m2t"]))
@click.argument("file", type=click.Path())
@click.argument("input_file", type=click.Path())
@click.option("--root", type=int, required=True)
def temperley(direction, file, input_file, root):
    """Convert spanning trees to matchings of the refinement (or back)."""
    g = _load(file)
    ref = refine.dual_refinement(g)
    if direction == "t2m":
        with open(input_file, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                tree = trees.orient_edge_set(g, _ids(line), (root,))
                mu = bijections.temperley_tree_to_matching(ref, tree)
                click.echo(" ".join(map(str, mu.sorted_edges())))
    else:
        host = bijections.refinement_host(ref, [root])
        for mu in _read_matchings(input_file, host):
            tree = bijections.temperley_matching_to_tree(ref, mu, root)
            click.echo(" ".join(map(str, sorted(tree.edge_set))))


def _transport_from_options(file, plain, prime, constraint):
    g = _load(file)
    inst = bijections.transport_instance(g, _ids(plain), _ids(prime))
    paths = {}
    for spec_text in constraint:
        idx, _, seq = spec_text.partition("=")
        sites = [int(t) for t in seq.split("-")]
        paths[int(idx)] = bijections.site_path_to_refinement(
            inst.smashed.refinement, sites)
    return inst, paths


@cli.command("tea-transport")
@click.argument("file", type=click.Path())
@click.argument("matchings_file", type=click.Path())
@click.option("--plain", required=True, help="marked run v1,v2,...")
@click.option("--prime", required=True, help="marked run v'1,v'2,...")
@click.option("--I", "subset", default="", help="constrained indices, e.g. 1,3")
@click.option("--constraint", multiple=True,
              help="path as INDEX=v1-v2-...; repeatable")
def tea_transport_cmd(file, matchings_file, plain, prime, subset, constraint):
    """Transport matchings between the two marked-run hosts."""
    inst, paths = _transport_from_options(file, plain, prime, constraint)
    chosen = set(_ids(subset)) if subset else set()
    for host in (inst.host_prime, inst.host_plain):
        try:
            mus = _read_matchings(matchings_file, host)
            break
        except ValueError:
            continue
    else:
        raise _Fail("matchings fit neither host")
    for mu in mus:
        out = bijections.tea_transport(inst, mu, chosen, paths)
        click.echo(" ".join(map(str, out.sorted_edges())))


@cli.command("verify-bijection")
@click.argument("kind", type=click.Choice(["phi", "temperley", "tea"]))
@click.argument("file", type=click.Path())
@click.option("--path", "path_", help="boundary path (phi)")
@click.option("--root", type=int, help="root vertex (temperley)")
@click.option("--plain", help="marked run (tea)")
@click.option("--prime", help="marked run (tea)")
def verify_bijection(kind, file, path_, root, plain, prime):
    """Exhaustively verify a bijection on one instance; exit 0/1."""
    g = _load(file)
    if kind == "phi":
        if not path_:
            raise click.UsageError("phi needs --path")
        inst = refine.section_instance(g, _ids(path_))
        plus = list(enumerate_matchings(inst.plus))
        images = [bijections.phi(inst, mu) for mu in plus]
        ok = (len({m.edges for m in images}) == len(images)
              and {m.edges for m in images}
              == {m.edges for m in enumerate_matchings(inst.minus)}
              and all(bijections.psi(inst, img).edges == mu.edges
                      for mu, img in zip(plus, images)))
        click.echo(f"{'PASS' if ok else 'FAIL'}: {len(plus)} matchings")
    elif kind == "temperley":
        if root is None:
            raise click.UsageError("temperley needs --root")
        ref = refine.dual_refinement(g)
        ok = True
        n_trees = 0
        for tree in trees.enumerate_spanning_trees(g, root):
            mu = bijections.temperley_tree_to_matching(ref, tree)
            ok = ok and bijections.temperley_matching_to_tree(ref, mu, root) == tree
            n_trees += 1
        ok = ok and count_matchings(bijections.refinement_host(ref, [root])) == n_trees
        click.echo(f"{'PASS' if ok else 'FAIL'}: {n_trees} trees")
    else:
        if not plain or not prime:
            raise click.UsageError("tea needs --plain and --prime")
        inst, _ = _transport_from_options(file, plain, prime, ())
        mus = list(enumerate_matchings(inst.host_prime))
        images = [bijections.tea_transport(inst, mu) for mu in mus]
        ok = (len({m.edges for m in images}) == len(images)
              and all(bijections.tea_transport(inst, img).edges == mu.edges
                      for mu, img in zip(mus, images))
              and count_matchings(inst.host_plain) == count_matchings(inst.host_prime))
        click.echo(f"{'PASS' if ok else 'FAIL'}: {len(mus)} matchings")
    if not ok:
        raise _Fail("bijection check failed")


@cli.group("trees")
def trees_group():
    """Spanning tree operations."""


@trees_group.command("count")
@click.argument("file", type=click.Path())
def trees_count(file):
    click.echo(str(trees.count_spanning_trees(_load(file))))


@trees_group.command("enumerate")
@click.argument("file", type=click.Path())
@click.option("--root", type=int, required=True)
def trees_enumerate(file, root):
    for tree in trees.enumerate_spanning_trees(_load(file), root):
        click.echo(" ".join(map(str, sorted(tree.edge_set))))


@cli.command()
@click.argument("direction", type=click.Choice(["f2m", "m2f"]))
@click.argument("file", type=click.Path())
@click.argument("input_file", type=click.Path())
@click.option("--plain", required=True)
@click.option("--prime", required=True)
def tec(direction, file, input_file, plain, prime):
    """Convert between banded forests and matchings of the smashed host."""
    g = _load(file)
    inst = bijections.transport_instance(g, _ids(plain), _ids(prime),
                                         require_plain_path=False)
    if direction == "m2f":
        for mu in _read_matchings(input_file, inst.host_prime):
            forest = trees.tec_matching_to_forest(inst, mu)
            click.echo(" ".join(map(str, sorted(forest.edge_set))))
    else:
        with open(input_file, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                forest = trees.orient_edge_set(inst.forest_graph, _ids(line),
                                               inst.prime_odd)
                mu = trees.tec_forest_to_matching(inst, forest)
                click.echo(" ".join(map(str, mu.sorted_edges())))


@cli.command()
@click.argument("file", type=click.Path())
@click.option("--root", type=int, required=True)
@click.option("--kind", type=click.Choice(["exit", "hv"]), default="exit")
@click.option("--samples", type=int, default=0)
@click.option("--seed", type=int, default=0)
@click.option("--axis", default="0", help="axis height y=c")
def independence(file, root, kind, samples, seed, axis):
    """Joint exit-indicator distribution for the uniform spanning tree."""
    g = _load(file)
    cert = check_reflection_symmetry(g, Fraction(axis))
    rep = trees.independence_report(g, cert, root,
                                    "exit-side" if kind == "exit" else "hv",
                                    samples=samples, seed=seed)
    click.echo(rep.render())
    if not rep.passed:
        raise _Fail("distribution check failed")


@cli.command()
@click.argument("file", type=click.Path())
@click.option("--cycle", required=True, help="comma-separated cycle vertices")
def parity(file, cycle):
    """Interior vertex/edge/face count of a simple cycle."""
    from .parity import interior_vertex_count

    ic = interior_vertex_count(_load(file), _ids(cycle))
    click.echo(f"vertices={ic.vertices} edges={ic.edges} faces={ic.faces} "
               f"total={ic.total} ({ic.parity})")


@cli.group()
def aztec():
    """Triangular Aztec regions."""


@aztec.command("formula")
@click.argument("n", type=int)
def aztec_formula_cmd(n):
    click.echo(str(aztec_mod.aztec_formula(n)))


@aztec.command("count")
@click.argument("n", type=int)
@click.argument("variant", type=click.Choice(["T", "Tp", "both"]), default="both")
def aztec_count(n, variant):
    for name in (("T", "Tp") if variant == "both" else (variant,)):
        inst = aztec_mod.aztec_graph(n, name)
        click.echo(f"{name}: {count_matchings(inst.graph)}")


@aztec.command("graph")
@click.argument("n", type=int)
@click.argument("variant", type=click.Choice(["T", "Tp"]))
@click.option("-o", "--out", type=click.Path())
def aztec_graph_cmd(n, variant, out):
    inst = aztec_mod.aztec_graph(n, variant)
    _emit(dump_graph(inst.graph), out)


@aztec.command("biject")
@click.argument("n", type=int)
@click.argument("matchings_file", type=click.Path())
@click.option("--variant", type=click.Choice(["T", "Tp"]), default="T")
@click.option("--svg", type=click.Path(), help="render the first image as SVG")
def aztec_biject(n, matchings_file, variant, svg):
    inst = aztec_mod.aztec_graph(n, variant)
    other = aztec_mod.aztec_graph(n, "Tp" if variant == "T" else "T")
    images = []
    for mu in _read_matchings(matchings_file, inst.graph):
        img = aztec_mod.aztec_bijection(n, mu)
        images.append(img)
        click.echo(" ".join(map(str, img.sorted_edges())))
    if svg and images:
        with open(svg, "w", encoding="utf-8") as fh:
            fh.write(aztec_mod.tiling_svg(other, images[0]))


@cli.command()
@click.argument("config", type=click.Path())
@click.option("--jobs", type=int, default=1)
@click.option("--seed", type=int, default=None)
@click.option("--timings", is_flag=True, help="print per-check times to stderr")
def suite(config, jobs, seed, timings):
    """Run a verification suite config; exit 0 iff every check passes."""
    try:
        with open(config, encoding="utf-8") as fh:
            text = fh.read()
        rep = report.run_suite(text, jobs=jobs, seed=seed)
    except (OSError, ConfigError) as exc:
        raise _ConfigFail(str(exc)) from exc
    click.echo(rep.render(), nl=False)
    if timings:
        for r in rep.results:
            click.echo(f"# {r.name}: {r.wall_time:.3f}s", err=True)
    if not rep.passed:
        raise _Fail("suite failed")


@cli.command()
@click.argument("kind", type=click.Choice(["section2", "symmetric", "tea", "tec", "trimmed"]))
@click.option("--seed", type=int, required=True)
@click.option("-o", "--out", type=click.Path())
def gen(kind, seed, out):
    """Generate a random valid instance file for the given construction."""
    if kind == "section2":
        inst = generators.random_section2(seed)
        text = dump_graph(inst.base)
        text += "#! path " + ",".join(map(str, inst.boundary.inner)) + "\n"
    elif kind == "symmetric":
        g, cert = generators.random_symmetric(seed)
        text = dump_graph(g)
        text += "#! axis 0\n"
    elif kind in ("tea", "tec"):
        inst, paths = generators.random_transport(seed, require_plain_path=(kind == "tea"))
        text = dump_graph(inst.smashed.refinement.source)
        text += "#! plain " + ",".join(map(str, inst.plain)) + "\n"
        text += "#! prime " + ",".join(map(str, inst.prime)) + "\n"
    else:
        g, n, removals = generators.random_trimmed(seed, require_connected=True)
        text = dump_graph(g)
        text += f"#! trimmed n={n} removals=" + \
            ";".join(f"{i},{j}" for i, j in removals) + "\n"
    _emit(text, out)


if __name__ == "__main__":
    main()
