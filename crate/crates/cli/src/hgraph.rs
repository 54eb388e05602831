//! Inspection dump of the transport-bipartite graph of one edge.

use std::fmt::Write as _;

use amply::matching::konig_decomposition;
use amply::witness::{
    build_transport_bipartite, check_h_regular, reachable_map, witness_with_params, EdgeClass,
    ReachableChain, RegularityCheck, Role, Side, TransportBipartite, WitnessCertificate,
};
use amply::{AmplyParams, Graph, Matching, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HGraphDump {
    pub params: AmplyParams,
    pub h: TransportBipartite,
    pub regularity: RegularityCheck,
    pub classes: Vec<Matching>,
    pub chains: Vec<Vec<ReachableChain>>,
    pub certificate: Option<WitnessCertificate>,
    pub failure: Option<String>,
}

/// Builds `H` for `xy`, decomposes it and runs the π₀ certificate. Fails
/// only when `H` cannot be built; later failures are recorded in the dump.
pub fn hgraph_dump(g: &Graph, x: usize, y: usize) -> Result<HGraphDump> {
    let params = g.amply_params()?;
    let h = build_transport_bipartite(g, x, y, &params)?;
    let regularity = check_h_regular(&h, &params);
    let mut dump = HGraphDump {
        params,
        h,
        regularity,
        classes: Vec::new(),
        chains: Vec::new(),
        certificate: None,
        failure: None,
    };
    if !dump.regularity.pass() {
        dump.failure = Some("H is not (β−1)-regular".into());
        return Ok(dump);
    }
    let run = || -> Result<(Vec<Matching>, Vec<Vec<ReachableChain>>, WitnessCertificate)> {
        let classes = konig_decomposition(&dump.h.bipartite()?)?;
        let chains = classes.iter().map(|m| reachable_map(&dump.h, m)).collect::<Result<_>>()?;
        Ok((classes, chains, witness_with_params(g, x, y, &params)?))
    };
    match run() {
        Ok((classes, chains, cert)) => {
            dump.classes = classes;
            dump.chains = chains;
            dump.certificate = Some(cert);
        }
        Err(e) => dump.failure = Some(e.to_string()),
    }
    Ok(dump)
}

fn role(r: &Role, left: bool) -> String {
    let prime = if left { "" } else { "′" };
    match *r {
        Role::Exclusive { host } => host.to_string(),
        Role::Common { index, host } => format!("z{}{prime}[{host}]", index + 1),
        Role::XCopy { index } => format!("x{}{prime}", index + 1),
    }
}

pub fn render_text(d: &HGraphDump) -> String {
    let h = &d.h;
    let mut out = String::new();
    let _ = writeln!(out, "H for edge {}-{} of {}", h.x, h.y, d.params);
    let side = |roles: &[Role], left| roles.iter().map(|r| role(r, left)).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "left  ({}): {}", h.left.len(), side(&h.left, true));
    let _ = writeln!(out, "right ({}): {}", h.right.len(), side(&h.right, false));
    let counts: Vec<String> = EdgeClass::ALL
        .iter()
        .map(|&c| format!("{c:?}={}", h.class_edges(c).count()))
        .collect();
    let _ = writeln!(out, "edges {}: {}", h.edges.len(), counts.join(" "));
    let _ = writeln!(
        out,
        "{}-regular: {}",
        d.regularity.expected,
        if d.regularity.pass() { "yes" } else { "NO" }
    );
    if let Some((s, i, r, deg)) = d.regularity.offender {
        let name = role(&r, s == Side::Left);
        let _ = writeln!(out, "  offender {s:?} vertex {i} ({name}) has degree {deg}");
    }
    let _ = writeln!(out, "decomposition classes: {}", d.classes.len());
    for (k, chains) in d.chains.iter().enumerate() {
        let _ = writeln!(out, "class {}:", k + 1);
        for c in chains {
            let path: Vec<String> = c.interior.iter().map(|r| role(r, true)).collect();
            let _ = writeln!(
                out,
                "  {} -> [{}] -> {}  ρ = {} k = {}",
                c.v0,
                path.join(" "),
                c.w0,
                c.rho,
                c.k
            );
        }
    }
    if let Some(c) = &d.certificate {
        let _ = writeln!(
            out,
            "π₀ cost {} ≤ {}; W = {}; κ_lb = {}; κ = {}; Σρ = {} ≤ d + k − 2 = {}",
            c.pi0_cost,
            c.cost_bound,
            c.wasserstein,
            c.kappa_lb,
            c.kappa,
            c.rho_sum,
            d.params.d + c.k_sum - 2
        );
    }
    if let Some(f) = &d.failure {
        let _ = writeln!(out, "failure: {f}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use amply::generators::*;
    use amply::{Error, Rational};

    #[test]
    fn h23_dump() {
        let g = gen_hamming(2, 3).unwrap();
        let d = hgraph_dump(&g, 0, 1).unwrap();
        assert_eq!(d.regularity.expected, 1);
        assert_eq!(d.classes.len(), 1);
        assert!(d.certificate.as_ref().unwrap().pi0_cost <= Rational::new(2, 5).unwrap());
        assert!(render_text(&d).contains("1-regular: yes"));
    }

    #[test]
    fn octahedron_dump() {
        let g = gen_cocktail(3).unwrap();
        let (x, y) = g.edges()[0];
        let d = hgraph_dump(&g, x, y).unwrap();
        assert_eq!(d.regularity.expected, 3);
        assert_eq!(d.classes.len(), 3);
        assert!(d.failure.is_none());
    }

    #[test]
    fn cube_is_rejected() {
        let g = gen_hypercube(3).unwrap();
        assert!(matches!(hgraph_dump(&g, 0, 1), Err(Error::Hypothesis(_))));
    }
}
