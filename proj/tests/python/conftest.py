import json
import os
import pathlib
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]
CONFIGS = ROOT / "configs"
SCHEMAS = ROOT / "schemas"


def cli_path():
    return os.environ.get("ANOSOV_GEO", str(ROOT / "build" / "anosov-geo"))


class Run:
    def __init__(self, proc, out):
        self.code = proc.returncode
        self.stdout = proc.stdout
        self.stderr = proc.stderr
        self.out = out

    def json(self, name):
        return json.loads((self.out / name).read_text())

    def csv(self, name):
        lines = (self.out / name).read_text().splitlines()
        header = lines[0].split(",")
        return [dict(zip(header, row.split(","))) for row in lines[1:]]

    def error(self):
        return json.loads(self.stderr.strip().splitlines()[-1])


@pytest.fixture
def cli(tmp_path):
    counter = {"n": 0}

    def run(command, config, *args):
        counter["n"] += 1
        out = tmp_path / f"out{counter['n']}"
        if isinstance(config, dict):
            path = tmp_path / f"config{counter['n']}.json"
            path.write_text(json.dumps(config))
            config = path
        elif not os.path.isabs(str(config)):
            config = CONFIGS / config
        proc = subprocess.run(
            [cli_path(), command, "--config", str(config), "--out", str(out), *args],
            capture_output=True,
            text=True,
            timeout=600,
        )
        return Run(proc, out)

    return run


@pytest.fixture
def schema():
    def load(name):
        return json.loads((SCHEMAS / f"{name}.schema.json").read_text())

    return load
