//! Line doubling by the pair doubling subroutine (PDS).
//!
//! The input line is read as left/right monomer pairs. Each pair runs a
//! 13-rule sequential chain: build a two-monomer bridge on top, hook it to
//! the right monomer, cut the pair bond, open a gap with a movement and
//! drop the first insert from the bridge, open a second gap and grow the
//! second insert sideways, splice, then tear the bridge down. Pairs never
//! read state outside themselves, so all pairs run concurrently; an odd
//! rightmost monomer just sprouts one partner.

use crate::constructions::{horizontal_line, Build, Construction, Target};
use crate::kinetics::config::{BondType, Configuration};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DoublingError {
    #[error("line length must be at least 2, got {0}")]
    TooShort(usize),
}

/// The 13 PDS rules plus the odd-monomer rule, with `dbl_a`/`dbl_b` as the
/// input pair states and `dbl_c`/`dbl_d` as the output pair states.
pub(crate) const PDS_RULES: &str = "
dbl_a, empty, null, +y -> pds_a1, pds_u1, rigid, +y    # 1 bridge post above the left monomer
pds_u1, empty, null, +x -> pds_u2, pds_v1, rigid, +x   # 2 bridge arm above the right monomer
pds_v1, dbl_b, null, -y -> pds_v2, pds_b1, rigid, -y   # 3 hook the bridge onto the right monomer
pds_a1, pds_b1, rigid, +x -> pds_a2, pds_b2, null, +x  # 4 cut the pair bond
pds_v2, pds_b2, rigid, -y -> pds_v3, pds_b3, rigid, -w # 5 movement: open the first gap
pds_v3, empty, null, -y -> pds_v4, pds_n1, rigid, -y   # 6 first insert drops from the bridge
pds_n1, pds_b3, null, +x -> pds_n2, pds_b4, rigid, +x  # 7 splice insert to the right monomer
pds_v4, pds_b4, rigid, -w -> pds_v5, dbl_d, null, -w   # 8 unhook bridge; right monomer done
pds_v5, pds_n2, rigid, -y -> pds_v6, pds_n3, rigid, -w # 9 movement: open the second gap
pds_n3, empty, null, -x -> dbl_c, pds_n5, rigid, -x    # 10 second insert grows back left
pds_a2, pds_n5, null, +x -> dbl_c, dbl_d, rigid, +x    # 11 splice to the left monomer
dbl_d, pds_v6, null, +y -> dbl_d, pds_v7, null, +y     # 12 line whole again; arm the teardown
pds_u2, pds_v7, rigid, +x -> empty, empty, null, +x    # 13 tear the bridge down
";

const ODD_RULE: &str = "
dbl_odd, empty, null, +x -> dbl_c, dbl_d, rigid, +x    # odd tail sprouts its partner
";

/// Generator: double a line of `l` monomers to `2l`.
pub fn gen_line_doubling(l: usize) -> Result<Construction, DoublingError> {
    if l < 2 {
        return Err(DoublingError::TooShort(l));
    }
    let mut b = Build::new();
    b.text(PDS_RULES);
    b.text(ODD_RULE);
    let a = b.state("dbl_a");
    let bb = b.state("dbl_b");
    let c = b.state("dbl_c");
    let d = b.state("dbl_d");
    let odd = b.state("dbl_odd");

    let mut input = Vec::with_capacity(l);
    for i in 0..l / 2 {
        let _ = i;
        input.push(a);
        input.push(bb);
    }
    if l % 2 == 1 {
        input.push(odd);
    }
    let mut initial = Configuration::new();
    horizontal_line(&mut initial, &input, BondType::Rigid);

    let mut output = Vec::with_capacity(2 * l);
    for _ in 0..l {
        output.push(c);
        output.push(d);
    }
    let mut target = Configuration::new();
    horizontal_line(&mut target, &output, BondType::Rigid);

    Ok(Construction {
        name: format!("line-doubling l={l}"),
        rules: b.finish(),
        initial,
        target: Target::Congruent(target),
        time_exponent: 1.0,
        // one extra row above the line, width 2l
        space_bound: (2 * l as u32, 2),
        max_events: (l as u64) * 40 + 100,
    })
}
