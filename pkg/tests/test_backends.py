import json
import os
import subprocess
import sys

from scratchlint import kernels

SNIPPET = """
import json, sys
from scratchlint import kernels
from scratchlint.finders.base import run_all
from scratchlint.project import parse_project
program = parse_project(open(sys.argv[1], encoding="utf-8").read())
print(json.dumps([kernels.BACKEND_NAME, [[i.finder_id, list(i.block_ids)] for i in run_all(program)]]))
"""


def analyze_with(env_value, path):
    env = dict(os.environ)
    env.pop("SCRATCHLINT_PURE_PYTHON", None)
    if env_value is not None:
        env["SCRATCHLINT_PURE_PYTHON"] = env_value
    out = subprocess.run([sys.executable, "-c", SNIPPET, str(path)], capture_output=True, text=True, env=env, check=True)
    return json.loads(out.stdout)


def test_pure_python_switch_gives_same_results(tmp_path, level_demo_text):
    path = tmp_path / "level_demo.json"
    path.write_text(level_demo_text, encoding="utf-8")
    pure_name, pure = analyze_with("1", path)
    default_name, default = analyze_with(None, path)
    assert pure_name == "python"
    assert default_name == ("cython" if kernels.compiled_backend is not None else "python")
    assert pure == default


def test_backend_is_exposed():
    assert kernels.backend in (kernels.compiled_backend, kernels.python_backend)
