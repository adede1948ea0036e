//! Fixed inputs shared by the benchmarks.

use subdiv_core::{parse_box, parse_system, IBox, PolySystem, Precision};

pub const CIRCLE_LINE: &str = "vars x y\nf1: x^2 + y^2 - 1\nf2: x - y\n";

/// Two simple roots `1` and `1 + 2^-60`.
pub const CLUSTERED: &str = "vars x\n\
p: (1152921504606846976*x - 1152921504606846976)*(1152921504606846976*x - 1152921504606846977)\n";

pub fn system(text: &str) -> PolySystem {
    parse_system(text).expect("fixture parses")
}

pub fn domain(text: &str, prec: Precision) -> IBox {
    parse_box(text, prec).expect("fixture domain parses")
}

pub fn precision(bits: u32) -> Precision {
    Precision::new(bits).expect("supported precision")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert_eq!(system(CIRCLE_LINE).dim(), 2);
        assert_eq!(system(CLUSTERED).dim(), 1);
        assert_eq!(domain("[0,2]", precision(53)).dim(), 1);
    }
}
