use crate::estimates::QuotientKind;

/// One row of `bbm-modlab list`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub kind: &'static str,
    pub fields: &'static str,
    pub result: &'static str,
}

const EXPERIMENTS: [Entry; 12] = [
    Entry {
        kind: "exponents",
        fields: "pack, sweep.sigma_points, sweep.pack_points",
        result: "exponent algebra of the global well-posedness results",
    },
    Entry {
        kind: "verify-partition",
        fields: "grid, estimate, sweep.fields",
        result: "frequency-uniform partition of unity",
    },
    Entry {
        kind: "group-laws",
        fields: "grid, estimate, sweep.group_fields, sweep.time_pairs",
        result: "unitary group S(t) commuting with the blocks",
    },
    Entry {
        kind: "kernel-check",
        fields: "grid, sweep.kernel_points, sweep.kernel_width, sweep.sigmas",
        result: "oscillatory kernel of S(t)J^sigma",
    },
    Entry {
        kind: "decay-fit",
        fields: "grid, family, windows, sweep.sigmas",
        result: "L1 to L-inf decay of S(t)J^sigma with kernel envelope",
    },
    Entry {
        kind: "envelope",
        fields: "grid, family, windows, sweep.sigmas",
        result: "kernel sup bound with calibrated epsilon and N",
    },
    Entry {
        kind: "quotient",
        fields: "grid, pack, family, windows.t_end, windows.samples, estimate, quotients",
        result: "modulation-space linear, product and Strichartz estimates",
    },
    Entry {
        kind: "strichartz",
        fields: "grid, pack, family, windows.t_end, windows.samples, strichartz",
        result: "Strichartz estimates for dispersive groups",
    },
    Entry {
        kind: "picard",
        fields: "grid, pack, estimate, picard",
        result: "contraction for the Duhamel formulation",
    },
    Entry {
        kind: "solitary",
        fields: "grid, solitary",
        result: "sech-power traveling waves and conserved quantities",
    },
    Entry {
        kind: "convolution-bound",
        fields: "convolution",
        result: "weighted time convolution for the global bootstrap",
    },
    Entry {
        kind: "determinism",
        fields: "inner",
        result: "byte-identical reruns",
    },
];

fn quotient_entry(name: &'static str) -> Entry {
    let (fields, result) = match name {
        "mod_decay" => ("pack, family", "time decay of S(t) between modulation spaces"),
        "compact_interval" => (
            "pack, family, windows.t_end",
            "L^r in time of S(t) on a compact interval",
        ),
        "phiD_growth" => ("pack, family", "growth of S(t)phi(D) on M^s_{p,q}"),
        "phiD_smooth" => ("pack, family", "one derivative of smoothing by phi(D)"),
        "product_bilinear" => (
            "quotients[].p1, p2, sigma, sigma1, sigma2, s, family",
            "bilinear product in modulation spaces",
        ),
        "product_power" => (
            "quotients[].m, q, nu, mu, s, family",
            "power nonlinearity in modulation spaces",
        ),
        "product_m" => ("quotients[].p, q, s, family", "m-fold product in modulation spaces"),
        "strichartz_hom" => ("pack, quotients[].symbol, mu, delta", "homogeneous Strichartz estimate"),
        "strichartz_inhom_smooth" => (
            "pack, quotients[].symbol, mu, delta",
            "inhomogeneous estimate into L-inf time",
        ),
        "strichartz_inhom_L1" => (
            "pack, quotients[].symbol, mu, delta",
            "inhomogeneous estimate from L1 time",
        ),
        "strichartz_retarded" => ("pack, quotients[].symbol, mu, delta", "retarded Strichartz estimate"),
        "duhamel_nonlinear" => (
            "pack, family, windows.t_end",
            "Duhamel term with the power nonlinearity",
        ),
        _ => unreachable!("registered kind"),
    };
    Entry {
        kind: name,
        fields,
        result,
    }
}

/// Experiments followed by every `quotient <kind>`, in a fixed order.
pub fn entries() -> Vec<Entry> {
    let mut out = EXPERIMENTS.to_vec();
    out.extend(QuotientKind::NAMES.iter().map(|n| quotient_entry(n)));
    out
}

/// Text table of [`entries`].
pub fn list_experiments() -> String {
    let rows: Vec<[String; 3]> = entries()
        .into_iter()
        .map(|e| {
            let kind = if EXPERIMENTS.iter().any(|x| x.kind == e.kind) {
                e.kind.to_owned()
            } else {
                format!("quotient {}", e.kind)
            };
            [kind, e.fields.to_owned(), e.result.to_owned()]
        })
        .collect();
    let header = ["kind", "config fields", "result"];
    let mut widths = header.map(str::len);
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: [&str; 3]| {
        format!(
            "{:<w0$}  {:<w1$}  {}\n",
            cells[0],
            cells[1],
            cells[2],
            w0 = widths[0],
            w1 = widths[1]
        )
    };
    let mut out = line(header);
    out.push_str(&line([
        "-".repeat(widths[0]).as_str(),
        "-".repeat(widths[1]).as_str(),
        "-".repeat(widths[2]).as_str(),
    ]));
    for r in &rows {
        out.push_str(&line([&r[0], &r[1], &r[2]]));
    }
    out
}
