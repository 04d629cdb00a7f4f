#!/usr/bin/env python3
"""Writes the test case directories under tests/fixtures.

toy3   3 buses, 2 lines, 2 units, one wind farm, one day at hourly samples.
week6  6 buses, 7 lines, 7 thermal units, wind, solar, run-of-river hydro,
       one storage unit, two water-facility DR units, one week at 1 minute.
rts73  73-bus RTS-style fleet with one day of 5-minute profiles; used for
       loader and validator coverage.

Output is deterministic: every random draw comes from a seeded generator.
"""

import argparse
import csv
import math
import random
from pathlib import Path

MJ_PER_MMBTU = 1055.06
FUEL_PRICE = {  # $/MMBTU
    "coal": 2.1139,
    "natural_gas": 3.8872,
    "oil": 10.3494,
    "nuclear": 0.8104,
}
# Energy density MJ/kg and CO2 kg/MJ; not given by the source tables.
FUEL_DENSITY = {"coal": 24.0, "natural_gas": 50.0, "oil": 43.0, "nuclear": 3.9e6}
CO2 = {"coal": 0.0946, "natural_gas": 0.0561, "oil": 0.0741, "nuclear": 0.0}

GEN_COLUMNS = [
    "id", "bus", "fuel_kind", "cooling_kind", "p_min", "p_max", "ramp_dn", "ramp_up",
    "heat_rate_fixed", "heat_rate_linear", "heat_rate_quadratic", "cost_startup", "cost_shutdown",
    "fuel_price", "fuel_energy_density", "co2_per_mj", "eta_other", "agc_capable", "initial_on",
    "initial_power",
]


def fmt(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(round(v, 9))
    return str(v)


def write(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(r.get(h, "")) for h in header])


def write_profile(case, prefix, rid, values, step):
    rows = [{"minute_index": i * step, "value_mw": max(0.0, v)} for i, v in enumerate(values)]
    write(case / "timeseries" / f"{prefix}_{rid}.csv", ["minute_index", "value_mw"], rows)


def gen(gid, bus, fuel, cooling, p_min, p_max, ramp, hr_fixed, hr_linear, hr_quad, startup, *,
        agc=False, on=False, power=0.0, eta=""):
    return {
        "id": gid, "bus": bus, "fuel_kind": fuel, "cooling_kind": cooling, "p_min": float(p_min),
        "p_max": float(p_max), "ramp_dn": -float(ramp), "ramp_up": float(ramp),
        "heat_rate_fixed": float(hr_fixed), "heat_rate_linear": float(hr_linear),
        "heat_rate_quadratic": float(hr_quad), "cost_startup": float(startup), "cost_shutdown": 0.0,
        "fuel_price": FUEL_PRICE[fuel] / MJ_PER_MMBTU, "fuel_energy_density": FUEL_DENSITY[fuel],
        "co2_per_mj": CO2[fuel], "eta_other": eta, "agc_capable": agc, "initial_on": on,
        "initial_power": float(power),
    }


def write_common(case, buses, lines, gens, storage, dr, ver, loads, system):
    write(case / "bus.csv", ["id", "area", "name"], buses)
    write(case / "branch.csv", ["id", "from_bus", "to_bus", "susceptance", "flow_limit"], lines)
    write(case / "gen.csv", GEN_COLUMNS, gens)
    write(case / "storage.csv",
          ["id", "bus", "discharge_min", "discharge_max", "charge_min", "charge_max", "energy_min",
           "energy_max", "efficiency", "initial_energy", "initial_discharging", "initial_charging",
           "cost_energy", "cost_discharge", "cost_charge"], storage)
    write(case / "dr.csv",
          ["id", "bus", "p_min", "p_max", "ramp_dn", "ramp_up", "cost_fixed", "cost_linear",
           "cost_quadratic", "cost_startup", "cost_shutdown", "is_water_facility", "enabled",
           "initial_on", "initial_power"], dr)
    write(case / "ver.csv",
          ["id", "bus", "kind", "capacity", "curtailable_fraction", "curtailment_cost", "ramp_dn",
           "ramp_up", "curtailment_enabled"], ver)
    write(case / "load.csv",
          ["id", "bus", "curtailable_fraction", "curtailment_cost", "water_supply_fraction",
           "wastewater_fraction"], loads)
    write(case / "system.csv", ["key", "value"], [{"key": k, "value": v} for k, v in system.items()])


def daily_load_shape(hour, weekend):
    """Per-unit demand with a morning shoulder and an evening peak."""
    base = 0.62
    morning = 0.18 * math.exp(-((hour - 9.0) / 2.5) ** 2)
    evening = 0.32 * math.exp(-((hour - 19.0) / 2.2) ** 2)
    midday = 0.10 * math.exp(-((hour - 14.0) / 3.0) ** 2)
    v = base + morning + evening + midday
    return v * (0.9 if weekend else 1.0)


def solar_shape(hour, clearness):
    if hour < 6.0 or hour > 18.5:
        return 0.0
    return clearness * math.sin(math.pi * (hour - 6.0) / 12.5) ** 1.5


def ar1(rng, n, phi, sigma):
    x, out = 0.0, []
    for _ in range(n):
        x = phi * x + rng.gauss(0.0, sigma)
        out.append(x)
    return out


def make_toy3(root):
    case = root / "toy3"
    buses = [{"id": i, "area": 1, "name": f"b{i}"} for i in (1, 2, 3)]
    lines = [
        {"id": "L12", "from_bus": 1, "to_bus": 2, "susceptance": 10.0, "flow_limit": 500.0},
        {"id": "L23", "from_bus": 2, "to_bus": 3, "susceptance": 10.0, "flow_limit": 500.0},
    ]
    gens = [
        gen("G1", 1, "coal", "recirculating", 20, 150, 3.0, 4000, 9500, 2.0, 500, agc=True, on=True,
            power=80),
        gen("G2", 3, "natural_gas", "once_through", 10, 100, 5.0, 2000, 8000, 4.0, 300, agc=True,
            on=False),
    ]
    storage = [{"id": "S1", "bus": 2, "discharge_min": 0.0, "discharge_max": 20.0, "charge_min": 0.0,
                "charge_max": 20.0, "energy_min": 0.0, "energy_max": 60.0, "efficiency": 0.9,
                "initial_energy": 30.0, "initial_discharging": False, "initial_charging": False,
                "cost_energy": 0.0, "cost_discharge": 0.0, "cost_charge": 0.0}]
    dr = [{"id": "D1", "bus": 2, "p_min": 0.0, "p_max": 10.0, "ramp_dn": -2.0, "ramp_up": 2.0,
           "cost_fixed": 0.0, "cost_linear": 50.0, "cost_quadratic": 0.0, "cost_startup": 0.0,
           "cost_shutdown": 0.0, "is_water_facility": True, "enabled": True, "initial_on": False,
           "initial_power": 0.0}]
    ver = [{"id": "W1", "bus": 2, "kind": "wind", "capacity": 60.0, "curtailable_fraction": 1.0,
            "curtailment_cost": 0.0, "ramp_dn": -12.0, "ramp_up": 12.0, "curtailment_enabled": True}]
    loads = [{"id": "Z1", "bus": 2, "curtailable_fraction": 0.0, "curtailment_cost": 50.0,
              "water_supply_fraction": 0.04, "wastewater_fraction": 0.02}]
    system = {"T_h": 1, "T_m": 5, "gamma": 0, "p_res": 0, "r_res": 0, "penalty_cost": 1000,
              "penalty_bound": 10000, "regulation_capacity": 40}
    write_common(case, buses, lines, gens, storage, dr, ver, loads, system)
    hours = range(24)
    write_profile(case, "load", "Z1", [100.0 + 40.0 * daily_load_shape(h % 24, False) for h in hours], 60)
    write_profile(case, "ver", "W1", [20.0 + 10.0 * math.sin(h / 4.0) for h in hours], 60)


def make_week6(root):
    case = root / "week6"
    rng = random.Random(20240607)
    buses = [{"id": i, "area": 1, "name": f"bus{i}"} for i in range(1, 7)]
    pairs = [(1, 2), (1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (3, 6)]
    lines = [{"id": f"L{a}{b}", "from_bus": a, "to_bus": b, "susceptance": 10.0, "flow_limit": 450.0}
             for a, b in pairs]
    gens = [
        gen("N1", 3, "nuclear", "once_through", 100, 150, 0.5, 0, 10500, 0.0, 20000, on=True, power=150),
        gen("C1", 1, "coal", "recirculating", 60, 200, 1.5, 60000, 9800, 2.0, 6000, agc=True, on=True, power=90),
        gen("C2", 1, "coal", "recirculating", 50, 150, 1.0, 50000, 10200, 3.0, 5000, agc=True),
        gen("CC1", 6, "natural_gas", "recirculating", 40, 180, 3.0, 45000, 7000, 3.0, 3000, agc=True,
            on=True, power=60, eta=0.12),
        gen("ST1", 4, "natural_gas", "recirculating", 25, 120, 2.0, 30000, 9500, 4.0, 2000, agc=True),
        gen("CT1", 6, "natural_gas", "dry", 10, 80, 4.0, 12000, 11000, 6.0, 800, agc=True),
        gen("OIL1", 3, "oil", "once_through", 10, 60, 2.5, 8000, 11500, 8.0, 600),
    ]
    storage = [{"id": "BAT1", "bus": 4, "discharge_min": 0.0, "discharge_max": 30.0, "charge_min": 0.0,
                "charge_max": 30.0, "energy_min": 10.0, "energy_max": 120.0, "efficiency": 0.9,
                "initial_energy": 60.0, "initial_discharging": False, "initial_charging": False,
                "cost_energy": 0.0, "cost_discharge": 0.0, "cost_charge": 0.0}]
    dr = [
        {"id": "WTP1", "bus": 2, "p_min": 0.0, "p_max": 15.0, "ramp_dn": -5.0, "ramp_up": 5.0,
         "cost_fixed": 0.0, "cost_linear": 50.0, "cost_quadratic": 0.0, "cost_startup": 0.0,
         "cost_shutdown": 10.0, "is_water_facility": True, "enabled": True, "initial_on": True,
         "initial_power": 0.0},
        {"id": "WWTP1", "bus": 5, "p_min": 0.0, "p_max": 10.0, "ramp_dn": -4.0, "ramp_up": 4.0,
         "cost_fixed": 0.0, "cost_linear": 50.0, "cost_quadratic": 0.0, "cost_startup": 0.0,
         "cost_shutdown": 10.0, "is_water_facility": True, "enabled": True, "initial_on": True,
         "initial_power": 0.0},
    ]
    ver = [
        {"id": "WIND1", "bus": 2, "kind": "wind", "capacity": 220.0, "curtailable_fraction": 1.0,
         "curtailment_cost": 0.0, "curtailment_enabled": True},
        {"id": "PV1", "bus": 5, "kind": "solar", "capacity": 160.0, "curtailable_fraction": 1.0,
         "curtailment_cost": 1.0, "curtailment_enabled": True},
        {"id": "HYD1", "bus": 3, "kind": "hydro", "capacity": 90.0, "curtailable_fraction": 1.0,
         "curtailment_cost": 2.5, "curtailment_enabled": True},
    ]
    for v in ver:
        v["ramp_up"] = v["capacity"] / 5.0
        v["ramp_dn"] = -v["capacity"] / 5.0
    zones = [("Z2", 2, 0.35), ("Z4", 4, 0.40), ("Z5", 5, 0.25)]
    loads = [{"id": z, "bus": b, "curtailable_fraction": 0.0, "curtailment_cost": 50.0,
              "water_supply_fraction": 0.05, "wastewater_fraction": 0.025} for z, b, _ in zones]
    peak = 620.0
    system = {"T_h": 1, "T_m": 5, "gamma": 0, "p_res": round(0.065 * peak, 3),
              "r_res": round(0.013 * peak, 3), "penalty_cost": 1000, "penalty_bound": 10000,
              "regulation_capacity": 40}
    write_common(case, buses, lines, gens, storage, dr, ver, loads, system)

    n = 7 * 1440
    load_noise = ar1(rng, n, 0.995, 0.25)
    for z, _, share in zones:
        vals = []
        for m in range(n):
            day, hour = divmod(m / 60.0, 24.0)
            vals.append(share * (peak * daily_load_shape(hour, day >= 5) / 1.05) + share * load_noise[m])
        write_profile(case, "load", z, vals, 1)

    # Wind: slow weather swings plus sharp drop events the thermal fleet
    # cannot follow at its ramp rates.
    weather = ar1(rng, n, 0.9995, 0.6)
    wind = []
    events = [(1 * 1440 + 17 * 60, 12), (2 * 1440 + 18 * 60 + 20, 10), (3 * 1440 + 7 * 60, 14),
              (4 * 1440 + 19 * 60, 9), (5 * 1440 + 16 * 60 + 30, 12), (6 * 1440 + 8 * 60, 10)]
    for m in range(n):
        v = 110.0 + 25.0 * math.sin(2 * math.pi * m / (1440 * 2.3)) + weather[m]
        for start, dur in events:
            if start <= m < start + dur:
                v -= 140.0 * (m - start) / dur
            elif start + dur <= m < start + dur + 90:
                v -= 140.0 * (1.0 - (m - start - dur) / 90.0)
        wind.append(min(215.0, max(0.0, v + rng.gauss(0.0, 1.5))))
    write_profile(case, "ver", "WIND1", wind, 1)

    clear = [0.95, 0.7, 0.9, 0.5, 1.0, 0.85, 0.6]
    cloud = ar1(rng, n, 0.98, 0.02)
    pv = []
    for m in range(n):
        day, hour = divmod(m / 60.0, 24.0)
        s = solar_shape(hour, clear[int(day)])
        pv.append(min(160.0, 150.0 * s * max(0.2, 1.0 + cloud[m])) if s > 0 else 0.0)
    write_profile(case, "ver", "PV1", pv, 1)

    flow = ar1(rng, n, 0.9998, 0.08)
    write_profile(case, "ver", "HYD1", [min(88.0, max(20.0, 55.0 + f + rng.gauss(0.0, 0.8))) for f in flow], 1)


def make_rts73(root):
    """RTS-style fleet: three 24-bus areas plus a hub bus, 73 thermal units,
    20 hydro, 56 solar, 4 wind, 1 storage. Profiles cover one day at 5 min."""
    case = root / "rts73"
    rng = random.Random(73)
    bus_ids = [100 * a + k for a in (1, 2, 3) for k in range(1, 25)] + [325]
    buses = [{"id": b, "area": b // 100, "name": f"bus{b}"} for b in bus_ids]
    lines = []
    for a in (1, 2, 3):
        ring = [100 * a + k for k in range(1, 25)]
        for i, b in enumerate(ring):
            lines.append({"id": f"A{a}_{i}", "from_bus": b, "to_bus": ring[(i + 1) % 24],
                          "susceptance": 12.0, "flow_limit": 500.0})
        for i in range(0, 24, 6):
            lines.append({"id": f"A{a}_x{i}", "from_bus": ring[i], "to_bus": ring[(i + 12) % 24],
                          "susceptance": 8.0, "flow_limit": 500.0})
    for a, b in ((113, 215), (123, 217), (121, 325), (223, 318), (325, 318)):
        lines.append({"id": f"T{a}_{b}", "from_bus": a, "to_bus": b, "susceptance": 6.0, "flow_limit": 500.0})
    kinds = ["coal"] * 16 + ["natural_gas"] * 48 + ["oil"] * 7 + ["nuclear"] * 2
    gens = []
    for i, fuel in enumerate(kinds):
        bus = bus_ids[(i * 7) % 72]
        size = {"coal": 155, "natural_gas": 120, "oil": 40, "nuclear": 400}[fuel]
        size *= rng.uniform(0.7, 1.3)
        cooling = "dry" if fuel == "natural_gas" and i % 5 == 0 else ("once_through" if i % 2 else "recirculating")
        gens.append(gen(f"T{i + 1:02d}", bus, fuel, cooling, round(0.35 * size, 1), round(size, 1),
                        round(size / 60.0, 2), 20.0 * size, {"coal": 9800, "natural_gas": 8200, "oil": 11500,
                                                             "nuclear": 10500}[fuel],
                        2.0, 10.0 * size, agc=fuel == "natural_gas", on=fuel in ("coal", "nuclear"),
                        power=round(0.6 * size, 1) if fuel in ("coal", "nuclear") else 0.0))
    storage = [{"id": "STOR1", "bus": 313, "discharge_min": 0.0, "discharge_max": 50.0, "charge_min": 0.0,
                "charge_max": 50.0, "energy_min": 0.0, "energy_max": 150.0, "efficiency": 0.9,
                "initial_energy": 75.0, "initial_discharging": False, "initial_charging": False,
                "cost_energy": 0.0, "cost_discharge": 0.0, "cost_charge": 0.0}]
    dr = [{"id": f"WDR{a}", "bus": 100 * a + 4, "p_min": 0.0, "p_max": 40.0, "ramp_dn": -8.0, "ramp_up": 8.0,
           "cost_fixed": 0.0, "cost_linear": 50.0, "cost_quadratic": 0.0, "cost_startup": 0.0,
           "cost_shutdown": 0.0, "is_water_facility": True, "enabled": True, "initial_on": False,
           "initial_power": 0.0} for a in (1, 2, 3)]
    ver = []
    for i in range(20):
        ver.append({"id": f"HY{i + 1:02d}", "bus": bus_ids[(i * 11 + 3) % 72], "kind": "hydro", "capacity": 50.0,
                    "curtailable_fraction": 1.0, "curtailment_cost": 2.5, "curtailment_enabled": True})
    for i in range(56):
        ver.append({"id": f"PV{i + 1:02d}", "bus": bus_ids[(i * 5 + 1) % 72], "kind": "solar", "capacity": 60.0,
                    "curtailable_fraction": 1.0, "curtailment_cost": 1.0, "curtailment_enabled": True})
    for i in range(4):
        ver.append({"id": f"WT{i + 1}", "bus": bus_ids[(i * 17 + 9) % 72], "kind": "wind", "capacity": 400.0,
                    "curtailable_fraction": 1.0, "curtailment_cost": 0.0, "curtailment_enabled": True})
    loads = [{"id": f"Z{b}", "bus": b, "curtailable_fraction": 0.0, "curtailment_cost": 50.0,
              "water_supply_fraction": 0.03, "wastewater_fraction": 0.015} for b in bus_ids[:72]]
    system = {"T_h": 1, "T_m": 5, "gamma": 0, "p_res": 240, "r_res": 80, "penalty_cost": 1000,
              "penalty_bound": 100000, "regulation_capacity": 40}
    write_common(case, buses, lines, gens, storage, dr, ver, loads, system)
    steps = 288
    for z in loads:
        w = rng.uniform(0.6, 1.4) * 7979.5 / 72 / 1.4
        write_profile(case, "load", z["id"], [w * daily_load_shape(s / 12.0, False) for s in range(steps)], 5)
    for v in ver:
        if v["kind"] == "hydro":
            vals = [30.0 + rng.uniform(-2, 2) for _ in range(steps)]
        elif v["kind"] == "solar":
            vals = [55.0 * solar_shape(s / 12.0, 0.9) for s in range(steps)]
        else:
            vals = [150.0 + 80.0 * math.sin(s / 40.0 + rng.uniform(0, 1)) for s in range(steps)]
        write_profile(case, "ver", v["id"], vals, 5)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "tests" / "fixtures")
    args = ap.parse_args()
    make_toy3(args.out)
    make_week6(args.out)
    make_rts73(args.out)


if __name__ == "__main__":
    main()
