import json

import pytest

from quditkit.compiler import EnergyLevelGraph, compile
from quditkit.core import Circuit
from quditkit.device import (
    Device,
    DeviceError,
    bundled_devices,
    load_device,
    save_device,
    validate_circuit,
)


def test_faketraps2six_contents():
    dev = load_device("faketraps2six")
    assert dev.dims == (6,) * 6
    for g in dev.graphs:
        assert g.edge_set() == {(i, i + 1) for i in range(5)}
    trap_pairs = {(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)}
    assert set(dev.couplings) == trap_pairs
    assert not dev.coupled(2, 3)
    assert dev.noise is not None


def test_bundled_devices_listed():
    assert "faketraps2six" in bundled_devices()


def test_minimal_qutrit(tmp_path):
    p = tmp_path / "q.json"
    p.write_text(json.dumps({"schema_version": 1, "name": "qutrit",
                             "qudits": [{"dim": 3, "level_edges": [[0, 1, 0.99], [1, 2, 0.98]]}],
                             "couplings": [], "native_gates": ["rxy", "rz"]}))
    dev = load_device(p)
    assert dev.dims == (3,)
    assert dev.graphs[0].fidelity(2, 1) == 0.98


def test_bad_edge_rejected(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"qudits": [{"dim": 3, "level_edges": [[0, 5, 0.9]]}]}))
    with pytest.raises(DeviceError):
        load_device(p)


@pytest.mark.parametrize("payload", [
    "not json",
    json.dumps({"schema_version": 9, "qudits": []}),
    json.dumps({"qudits": [{"dim": 3}], "couplings": [[0, 4, 0.9]]}),
    json.dumps({"qudits": [{"dim": 3}, {"dim": 3}], "couplings": [[0, 1, 0.0]]}),
])
def test_malformed_devices(tmp_path, payload):
    p = tmp_path / "d.json"
    p.write_text(payload)
    with pytest.raises(DeviceError):
        load_device(p)


def test_unknown_device_name():
    with pytest.raises(DeviceError):
        load_device("fakenothing")


def test_save_load_roundtrip(tmp_path):
    dev = load_device("faketraps2six")
    save_device(dev, tmp_path / "d.json")
    back = load_device(tmp_path / "d.json")
    assert back.to_dict() == dev.to_dict()


def test_dim_violation():
    c = Circuit.from_dims([7])
    kinds = [v.kind for v in validate_circuit(c, load_device("faketraps2six"))]
    assert kinds == ["dimension"]


def test_level_edge_violation():
    c = Circuit.from_dims([6])
    c.rxy(0, 0, 5, 0.3, 0.0)
    (v,) = validate_circuit(c, load_device("faketraps2six"))
    assert v.kind == "level_edge" and v.position == 0


def test_coupling_and_native_violations():
    c = Circuit.from_dims([3, 3, 3, 3])
    c.csum(2, 3)
    kinds = sorted(v.kind for v in validate_circuit(c, load_device("faketraps2six")))
    assert kinds == ["coupling", "native"]


def test_controlled_rotations_are_native():
    c = Circuit.from_dims([3, 3])
    c.rxy(1, 0, 1, 0.3, 0.2, controls=[0], levels=[2])
    c.rz(0, 1, 2, 0.3, controls=[1], levels=[0])
    c.pswap(0, 1, (0, 1), (1, 0), 0.2, 0.0)
    assert validate_circuit(c, load_device("faketraps2six")) == []


def test_size_violation():
    c = Circuit.from_dims([2] * 7)
    assert [v.kind for v in validate_circuit(c, load_device("faketraps2six"))] == ["size"]


def test_compiled_output_validates_on_custom_device():
    graphs = (EnergyLevelGraph.star(4, 0, 0.99), EnergyLevelGraph(4, ((0, 2, 0.9), (2, 1, 0.95), (1, 3, 0.99))))
    dev = Device("custom", graphs, {(0, 1): 0.97})
    c = Circuit.from_dims([4, 3])
    c.h(0)
    c.h(1)
    c.csum(0, 1)
    c.ms(1, 0, 0.4)
    out = compile(c, dev, ["PhyLocQRPass", "PhyEntQRPass"])
    assert validate_circuit(out, dev) == []
