"""Command-line client for the denoising service.

Every command talks HTTP to the service: against `--server URL` if given,
otherwise against an in-process instance of the app, so the CLI works
standalone without a running server.
"""

from __future__ import annotations

import json
import sys

import click

from .pgmio import read_image, write_image
from .service import decode_image, encode_image


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


class ServiceClient:
    def __init__(self, server: str | None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            from fastapi.testclient import TestClient

            from .service import app

            self._client = TestClient(app, raise_server_exceptions=False)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail")
            except Exception:
                detail = resp.text
            raise click.ClickException(f"{path}: {detail}")
        return resp.json()


pass_client = click.make_pass_decorator(ServiceClient)


@click.group()
@click.option("--server", default=None, metavar="URL", help="Remote service URL (default: run in-process).")
@click.pass_context
def main(ctx, server):
    """Grayscale image denoising with optimally weighted bilateral filters."""
    ctx.obj = ServiceClient(server)


def _load_b64(path: str) -> str:
    return encode_image(read_image(path))


def _save_b64(payload: str, path: str) -> None:
    write_image(decode_image(payload), path)


@main.command("add-noise")
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--sigma", type=float, required=True, help="Noise standard deviation (gray levels).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False), help="Output image (.pfm recommended: unclipped).")
@pass_client
def add_noise(client, input_path, sigma, seed, out_path):
    """Corrupt INPUT_PATH with seeded white Gaussian noise."""
    r = client.post("/v1/add-noise", {"image": _load_b64(input_path), "sigma": sigma, "seed": seed})
    _save_b64(r["image"], out_path)
    click.echo(f"sigma={_fmt(sigma)} seed={seed} mse={_fmt(r['mse'])} psnr_db={_fmt(r['psnr_db'])}")


def _diag_line(diag: dict) -> str:
    return json.dumps({k: v for k, v in diag.items() if v is not None}, sort_keys=True)


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--filter", "filter_name", type=click.Choice(["sbf", "rbf", "wbf"]), required=True)
@click.option("--impl", type=click.Choice(["direct", "fast"]), default="fast", show_default=True)
@click.option("--sigma", type=float, default=None, help="Noise level; required for wbf, enables SURE otherwise.")
@click.option("--sigma-s", type=float, required=True, help="Spatial kernel width (pixels).")
@click.option("--sigma-r", type=float, required=True, help="Range kernel width (gray levels).")
@click.option("--half-width", type=int, default=None, help="Window half-width W (default ceil(3 sigma_s)).")
@click.option("-L", "--box-half-width", type=int, default=1, show_default=True, help="Box guide half-width.")
@click.option("--n-terms", type=int, default=None, help="Override the kernel expansion order.")
@click.option("--clean", type=click.Path(exists=True, dir_okay=False), default=None, help="Clean reference for PSNR reporting.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the denoised image here.")
@click.option("--fd-derivatives", is_flag=True, help="Enable finite-difference derivatives for direct impl (slow).")
@click.option("--compare", is_flag=True, help="Also run the other impl and report the max per-pixel difference.")
@click.option("--threads", type=int, default=None, help="Worker cap (fallback: OWBF_THREADS).")
@pass_client
def denoise(client, input_path, filter_name, impl, sigma, sigma_s, sigma_r, half_width,
            box_half_width, n_terms, clean, out_path, fd_derivatives, compare, threads):
    """Denoise INPUT_PATH; diagnostics go to stdout as one JSON line."""
    payload = {
        "image": _load_b64(input_path),
        "filter": filter_name,
        "impl": impl,
        "settings": {
            "sigma_s": sigma_s,
            "sigma_r": sigma_r,
            "half_width": half_width,
            "box_half_width": box_half_width,
        },
        "sigma": sigma,
        "clean": _load_b64(clean) if clean else None,
        "n_override": n_terms,
        "fd_derivatives": fd_derivatives,
        "compare": compare,
        "threads": threads,
    }
    r = client.post("/v1/denoise", payload)
    if out_path:
        _save_b64(r["image"], out_path)
    click.echo(_diag_line(r["diagnostics"]))


@main.command()
@click.argument("path_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("path_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text", "jsonl"]), default="text", show_default=True)
@pass_client
def metrics(client, path_a, path_b, fmt):
    """MSE and PSNR between two images."""
    r = client.post("/v1/metrics", {"a": _load_b64(path_a), "b": _load_b64(path_b)})
    if fmt == "jsonl":
        click.echo(json.dumps(r, sort_keys=True))
    else:
        click.echo(f"mse={_fmt(r['mse'])} psnr_db={_fmt(r['psnr_db'])}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}")


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--filter", "filter_name", type=click.Choice(["sbf", "rbf", "wbf"]), required=True)
@click.option("--impl", type=click.Choice(["direct", "fast"]), default="fast", show_default=True)
@click.option("--sigma", type=float, default=None)
@click.option("--sigma-s", "sigma_s_grid", required=True, help="Comma-separated sigma_s values.")
@click.option("--sigma-r", "sigma_r_grid", required=True, help="Comma-separated sigma_r values.")
@click.option("-L", "--box-half-width", type=int, default=1, show_default=True)
@click.option("--clean", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["csv", "jsonl"]), default="csv", show_default=True)
@click.option("--fd-derivatives", is_flag=True)
@click.option("--threads", type=int, default=None)
@pass_client
def sweep(client, input_path, filter_name, impl, sigma, sigma_s_grid, sigma_r_grid,
          box_half_width, clean, out_path, fmt, fd_derivatives, threads):
    """Parameter sweep over a (sigma_s, sigma_r) grid; best rows are flagged."""
    payload = {
        "image": _load_b64(input_path),
        "filter": filter_name,
        "impl": impl,
        "sigma": sigma,
        "sigma_s_values": _float_list(sigma_s_grid),
        "sigma_r_values": _float_list(sigma_r_grid),
        "box_half_width": box_half_width,
        "clean": _load_b64(clean) if clean else None,
        "fd_derivatives": fd_derivatives,
        "threads": threads,
    }
    r = client.post("/v1/sweep", payload)
    rows = r["rows"]
    if fmt == "jsonl":
        text = "\n".join(json.dumps({k: v for k, v in row.items() if v is not None}, sort_keys=True) for row in rows)
    else:
        cols = ["sigma_s", "sigma_r", "psnr_db", "sure_sbf", "sure_rbf", "sure_wbf",
                "n_terms", "time_s", "best_psnr", "best_sure"]
        used = [c for c in cols if any(row.get(c) is not None for row in rows)]
        lines = [",".join(used)]
        for row in rows:
            lines.append(",".join("" if row.get(c) is None else _fmt(row[c]) for c in used))
        text = "\n".join(lines)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def _parse_settings(text: str) -> list[list[float]]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            ss, sr = part.split(":")
            out.append([float(ss), float(sr)])
        except ValueError:
            raise click.BadParameter(f"expected sigma_s:sigma_r pairs, got {part!r}")
    if not out:
        raise click.BadParameter("no parameter settings given")
    return out


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--params", required=True, help="Comma-separated sigma_s:sigma_r pairs, e.g. '5:30,2:15'.")
@click.option("--repeats", type=int, default=3, show_default=True)
@click.option("-L", "--box-half-width", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "csv"]), default="text", show_default=True)
@pass_client
def bench(client, input_path, params, repeats, box_half_width, fmt):
    """Time the direct vs fast implementation on INPUT_PATH."""
    payload = {
        "image": _load_b64(input_path),
        "settings": _parse_settings(params),
        "repeats": repeats,
        "box_half_width": box_half_width,
    }
    r = client.post("/v1/bench", payload)
    cells = r["cells"]
    if fmt == "csv":
        cols = ["sigma_s", "sigma_r", "direct_mean_s", "direct_min_s",
                "fast_mean_s", "fast_min_s", "max_abs_diff"]
        click.echo(",".join(cols))
        for c in cells:
            click.echo(",".join(_fmt(c[k]) for k in cols))
    else:
        for c in cells:
            click.echo(
                f"({_fmt(c['sigma_s'])},{_fmt(c['sigma_r'])}) "
                f"direct mean={_fmt(c['direct_mean_s'])}s min={_fmt(c['direct_min_s'])}s  "
                f"fast mean={_fmt(c['fast_mean_s'])}s min={_fmt(c['fast_min_s'])}s  "
                f"max_abs_diff={_fmt(c['max_abs_diff'])}"
            )


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("owbf.service:app", host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
