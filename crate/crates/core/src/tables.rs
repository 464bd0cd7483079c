//! Published code parameters for the four stacked families.
//!
//! Each entry records `[[n, k, d]]`, whether `d` is only an upper bound, the
//! lattice, the two base polynomials as written (exponents are reduced on
//! construction), the odd/even class and the listed `kd²/n`.

use crate::algebra::{LatticeSpec, PolySpec};
use crate::codes::{CodeSpec, Family, Parity};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub table: &'static str,
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// `d` is reported as `≤ d`.
    pub d_is_bound: bool,
    pub l: usize,
    pub m: usize,
    pub gamma: usize,
    pub a: &'static [&'static str],
    pub b: &'static [&'static str],
    pub parity: Parity,
    /// Listed figure of merit, when the table has that column.
    pub merit: Option<f64>,
}

impl TableEntry {
    pub fn lattice(&self) -> LatticeSpec {
        match self.family {
            Family::Bicycle | Family::Bb => LatticeSpec::periodic(self.l, self.m),
            Family::TwistedBb => LatticeSpec::twisted(self.l, self.m, self.gamma),
            Family::Reflection => LatticeSpec::reflection(self.l, self.m),
        }
    }

    pub fn spec(&self) -> Result<CodeSpec> {
        let lattice = self.lattice();
        let (a, _) = PolySpec::parse(&lattice, self.a)?;
        let (b, _) = PolySpec::parse(&lattice, self.b)?;
        Ok(CodeSpec { family: self.family, lattice, a, b, name: Some(self.label()) })
    }

    pub fn label(&self) -> String {
        let bound = if self.d_is_bound { "<=" } else { "" };
        format!("{} [[{},{},{}{}]] {}", self.table, self.n, self.k, bound, self.d, self.family)
    }
}

use Family::{Bb, Bicycle, Reflection, TwistedBb};
use Parity::{Even, Odd};

#[allow(clippy::too_many_arguments)]
const fn row(
    table: &'static str,
    family: Family,
    (n, k, d, d_is_bound): (usize, usize, usize, bool),
    (l, m, gamma): (usize, usize, usize),
    a: &'static [&'static str],
    b: &'static [&'static str],
    parity: Parity,
    merit: Option<f64>,
) -> TableEntry {
    TableEntry { table, family, n, k, d, d_is_bound, l, m, gamma, a, b, parity, merit }
}

const X: bool = false;
const LE: bool = true;

pub static TABLE_ENTRIES: &[TableEntry] = &[
    // Double-chain bicycle codes.
    row("T1", Bicycle, (36, 4, 6, X), (9, 1, 0), &["1", "x4"], &["x3", "x6"], Odd, None),
    row("T1", Bicycle, (84, 12, 6, X), (21, 1, 0), &["x2", "x5"], &["x5", "x14"], Odd, None),
    row("T1", Bicycle, (100, 12, 8, X), (25, 1, 0), &["x10", "x24"], &["x10", "x16"], Odd, None),
    row("T1", Bicycle, (108, 4, 12, X), (27, 1, 0), &["x22", "x24"], &["x12", "x22"], Odd, None),
    row("T1", Bicycle, (132, 8, 12, X), (33, 1, 0), &["x10", "x11"], &["x11", "x31"], Odd, None),
    row("T1", Bicycle, (24, 8, 4, X), (6, 1, 0), &["1", "x2"], &["x3", "x4"], Even, None),
    row("T1", Bicycle, (72, 6, 8, X), (18, 1, 0), &["x2", "x17"], &["x4", "x5"], Even, None),
    row("T1", Bicycle, (80, 8, 8, X), (20, 1, 0), &["1", "x17"], &["x8", "x17"], Even, None),
    row("T1", Bicycle, (88, 4, 10, X), (22, 1, 0), &["x13", "x18"], &["x", "x5"], Even, None),
    row("T1", Bicycle, (104, 6, 12, X), (26, 1, 0), &["x6", "x11"], &["x5", "x14"], Even, None),
    // Double-layer BB codes.
    row("T2", Bb, (60, 12, 5, X), (3, 5, 0), &["x2y2", "x2y"], &["x2y2", "x2"], Odd, Some(5.0)),
    row("T2", Bb, (84, 8, 8, X), (3, 7, 0), &["x2y", "x"], &["x2y2", "x"], Odd, Some(6.1)),
    row("T2", Bb, (100, 12, 8, X), (5, 5, 0), &["xy", "x4y"], &["y2", "x4y3"], Odd, Some(7.7)),
    row("T2", Bb, (108, 16, 6, X), (9, 3, 0), &["x2y6", "x3y3"], &["x2y4", "x4y"], Odd, Some(5.3)),
    row("T2", Bb, (140, 16, 8, X), (7, 5, 0), &["y4", "x2y2"], &["y2", "x5y"], Odd, Some(7.3)),
    row("T2", Bb, (56, 6, 8, X), (7, 2, 0), &["y4", "xy3"], &["x5", "x2y3"], Even, Some(6.9)),
    row("T2", Bb, (80, 10, 8, X), (5, 4, 0), &["y2", "y"], &["x2y", "x4"], Even, Some(8.0)),
    row("T2", Bb, (112, 8, 12, X), (14, 2, 0), &["x3y7", "x11y4"], &["y2", "x5y12"], Even, Some(10.3)),
    row("T2", Bb, (120, 8, 12, X), (6, 5, 0), &["x4", "x5y4"], &["x", "x5y3"], Even, Some(9.6)),
    row("T2", Bb, (160, 20, 8, X), (4, 10, 0), &["y3", "x2y2"], &["x", "x3y3"], Even, Some(8.0)),
    // Double-layer twisted BB codes.
    row("T3", TwistedBb, (100, 12, 8, X), (5, 5, 3), &["xy3", "x3y3"], &["x2y2", "x4y3"], Odd, Some(7.7)),
    row("T3", TwistedBb, (132, 8, 12, X), (3, 11, 9), &["1", "x2y2"], &["y2", "x1y"], Odd, Some(8.7)),
    row("T3", TwistedBb, (140, 16, 8, X), (5, 7, 1), &["x2y", "y"], &["x2", "x4y2"], Odd, Some(7.3)),
    row("T3", TwistedBb, (180, 20, 8, X), (5, 9, 4), &["y3", "x"], &["x4y", "xy2"], Odd, Some(7.1)),
    row("T3", TwistedBb, (204, 8, 16, X), (17, 3, 2), &["x2y5", "x14y"], &["x11y16", "x13y10"], Odd, Some(10.0)),
    row("T3", TwistedBb, (112, 8, 12, X), (2, 14, 6), &["y", "xy"], &["1", "y"], Even, Some(10.3)),
    row("T3", TwistedBb, (128, 16, 8, X), (4, 8, 4), &["xy", "xy3"], &["x2y2", "xy2"], Even, Some(8.0)),
    row("T3", TwistedBb, (144, 8, 12, X), (2, 18, 10), &["1", "y"], &["y", "xy"], Even, Some(8.0)),
    row("T3", TwistedBb, (176, 10, 12, X), (11, 4, 1), &["x5y2", "x2y8"], &["x10y", "y2"], Even, Some(8.2)),
    row("T3", TwistedBb, (208, 8, 16, X), (26, 2, 1), &["x10y21", "x7y21"], &["x10y4", "xy21"], Even, Some(9.8)),
    // Double-layer reflection codes.
    row("T4", Reflection, (68, 4, 10, X), (17, 1, 0), &["x8y5q", "x9y12q"], &["x11y2", "x15y16q"], Odd, Some(5.9)),
    row("T4", Reflection, (100, 12, 8, X), (5, 5, 0), &["x2py", "x2py4"], &["xy2", "x3y"], Odd, Some(7.7)),
    row("T4", Reflection, (120, 8, 10, X), (10, 3, 0), &["x2py4", "xy9"], &["x7y4q", "x3y7q"], Odd, Some(6.7)),
    row("T4", Reflection, (180, 20, 8, X), (15, 3, 0), &["x7y8", "x2y12q"], &["x14y12q", "x10y10"], Odd, Some(7.1)),
    row("T4", Reflection, (252, 16, 16, X), (7, 9, 0), &["x6y3q", "x5y"], &["xy3", "x6y6"], Odd, Some(16.3)),
    row("T4", Reflection, (64, 16, 8, X), (4, 4, 0), &["xyq", "xpy3q"], &["xyq", "x3py"], Even, Some(16.0)),
    row("T4", Reflection, (96, 20, 8, X), (4, 6, 0), &["x3py3", "xy"], &["x2y2", "x2y3"], Even, Some(13.3)),
    row("T4", Reflection, (120, 14, 10, X), (15, 2, 0), &["x11y14q", "x7y14"], &["x10y6", "x11y12q"], Even, Some(11.7)),
    row("T4", Reflection, (128, 32, 8, X), (8, 4, 0), &["x2py6", "x6"], &["x2y5", "x6yq"], Even, Some(16.0)),
    row("T4", Reflection, (144, 16, 12, X), (18, 2, 0), &["x11y6", "x15y13q"], &["x3q", "x13y10"], Even, Some(16.0)),
    // More double-chain bicycle codes.
    row("EM1", Bicycle, (116, 4, 14, X), (29, 1, 0), &["1", "x3"], &["x20", "x25"], Odd, Some(6.8)),
    row("EM1", Bicycle, (132, 8, 12, X), (33, 1, 0), &["x10", "x11"], &["x11", "x31"], Odd, Some(8.7)),
    row("EM1", Bicycle, (148, 4, 16, X), (37, 1, 0), &["x21", "x24"], &["x17", "x22"], Odd, Some(6.9)),
    row("EM1", Bicycle, (176, 16, 8, X), (44, 1, 0), &["x11", "x31"], &["1", "x8"], Odd, Some(5.8)),
    row("EM1", Bicycle, (204, 4, 18, LE), (51, 1, 0), &["1", "x14"], &["x32", "x40"], Odd, Some(6.4)),
    row("EM1", Bicycle, (276, 12, 12, LE), (69, 1, 0), &["x27", "x33"], &["x15", "x54"], Odd, Some(6.3)),
    row("EM1", Bicycle, (380, 12, 16, LE), (95, 1, 0), &["x2", "x25"], &["x58", "x75"], Odd, Some(8.1)),
    row("EM1", Bicycle, (240, 28, 6, LE), (60, 1, 0), &["x41", "x59"], &["x4", "x26"], Even, Some(4.2)),
    row("EM1", Bicycle, (248, 4, 20, LE), (62, 1, 0), &["x7", "x26"], &["x32", "x34"], Even, Some(6.5)),
    row("EM1", Bicycle, (264, 8, 16, LE), (66, 1, 0), &["x4", "x18"], &["x42", "x53"], Even, Some(7.8)),
    row("EM1", Bicycle, (280, 4, 22, LE), (70, 1, 0), &["x25", "x51"], &["x21", "x64"], Even, Some(6.9)),
    row("EM1", Bicycle, (296, 6, 18, LE), (74, 1, 0), &["x6", "x65"], &["x8", "x25"], Even, Some(6.6)),
    row("EM1", Bicycle, (312, 6, 20, LE), (78, 1, 0), &["x14", "x73"], &["x2", "x71"], Even, Some(7.7)),
    row("EM1", Bicycle, (360, 4, 24, LE), (90, 1, 0), &["x22", "x24"], &["x", "x52"], Even, Some(6.4)),
    // More double-layer BB codes.
    row("EM2", Bb, (60, 12, 5, X), (3, 5, 0), &["x2y2", "x2y"], &["x2y2", "x2"], Odd, Some(5.0)),
    row("EM2", Bb, (156, 12, 10, X), (13, 3, 0), &["y6", "x10y12"], &["x10y11", "x8y8"], Odd, Some(7.7)),
    row("EM2", Bb, (204, 8, 16, LE), (17, 3, 0), &["x", "x6y10"], &["x2y12", "x6y11"], Odd, Some(10.0)),
    row("EM2", Bb, (228, 4, 20, LE), (19, 3, 0), &["x17y13", "x11y13"], &["x13", "x18y"], Odd, Some(7.0)),
    row("EM2", Bb, (260, 20, 10, LE), (5, 13, 0), &["x4y2", "x41"], &["x2", "x2y3"], Odd, Some(7.7)),
    row("EM2", Bb, (276, 4, 22, LE), (23, 3, 0), &["x20y19", "x16y12"], &["x17y18", "x8y9"], Odd, Some(7.0)),
    row("EM2", Bb, (280, 32, 8, LE), (7, 10, 0), &["xy5", "x4y3"], &["x3y3", "x6y3"], Odd, Some(7.3)),
    row("EM2", Bb, (364, 28, 10, LE), (7, 13, 0), &["y5", "y4"], &["xy", "xy6"], Odd, Some(7.7)),
    row("EM2", Bb, (24, 8, 4, X), (3, 2, 0), &["xy2", "x2"], &["x2y", "xy2"], Even, Some(5.3)),
    row("EM2", Bb, (32, 12, 4, X), (2, 4, 0), &["xy", "x"], &["x", "y"], Even, Some(6.0)),
    row("EM2", Bb, (64, 24, 4, X), (4, 4, 0), &["x3y3", "x"], &["xy2", "xy3"], Even, Some(6.0)),
    row("EM2", Bb, (88, 4, 12, X), (11, 2, 0), &["y7", "xy"], &["x9y4", "x7y7"], Even, Some(6.5)),
    row("EM2", Bb, (104, 6, 12, X), (13, 2, 0), &["x2y8", "x9y"], &["x7y", "x6y8"], Even, Some(8.3)),
    row("EM2", Bb, (128, 16, 8, X), (16, 2, 0), &["x7y9", "x8y9"], &["x5y9", "x2y11"], Even, Some(8.0)),
    row("EM2", Bb, (168, 6, 16, X), (6, 7, 0), &["y4", "x3y"], &["y5", "x5"], Even, Some(9.1)),
    row("EM2", Bb, (192, 24, 8, X), (12, 4, 0), &["x2y3", "x7y9"], &["x2y10", "x11y2"], Even, Some(8.0)),
    row("EM2", Bb, (208, 12, 12, LE), (26, 2, 0), &["x21y9", "x24y17"], &["x20y4", "xy4"], Even, Some(8.3)),
    row("EM2", Bb, (216, 16, 10, LE), (6, 9, 0), &["x2", "x2y5"], &["y3", "x3y2"], Even, Some(7.4)),
    row("EM2", Bb, (224, 16, 12, LE), (4, 14, 0), &["x3y3", "xy"], &["x3y", "x11"], Even, Some(10.3)),
    row("EM2", Bb, (248, 6, 20, LE), (31, 2, 0), &["x29y25", "x3y22"], &["x29y28", "x22y11"], Even, Some(9.7)),
    row("EM2", Bb, (272, 8, 20, LE), (17, 4, 0), &["x9y11", "x10y8"], &["x31", "xy11"], Even, Some(11.8)),
    row("EM2", Bb, (288, 12, 16, LE), (9, 8, 0), &["x7y8", "x4y3"], &["x8y2", "x7y7"], Even, Some(10.7)),
    row("EM2", Bb, (320, 16, 16, LE), (10, 8, 0), &["x7y8", "x9y9"], &["x5y6", "y"], Even, Some(12.8)),
    row("EM2", Bb, (384, 48, 8, LE), (12, 8, 0), &["xy4", "xy10"], &["x5y11", "x8y8"], Even, Some(8.0)),
    // More double-layer twisted BB codes.
    row("EM3", TwistedBb, (60, 12, 5, X), (3, 5, 4), &["x2", "x2y"], &["1", "y2"], Odd, Some(5.0)),
    row("EM3", TwistedBb, (84, 8, 8, X), (3, 7, 4), &["1", "xy2"], &["y2", "x2y2"], Odd, Some(6.1)),
    row("EM3", TwistedBb, (100, 12, 8, X), (5, 5, 3), &["xy3", "x3y3"], &["x2y2", "x4y3"], Odd, Some(7.7)),
    row("EM3", TwistedBb, (220, 12, 12, LE), (11, 5, 2), &["x9y9", "x2y2"], &["x7", "x9y5"], Odd, Some(7.9)),
    row("EM3", TwistedBb, (228, 8, 16, LE), (3, 19, 1), &["y2", "x"], &["1", "x2y2"], Odd, Some(9.0)),
    row("EM3", TwistedBb, (252, 4, 20, LE), (7, 9, 4), &["x2y4", "x2"], &["x3y", "x6y4"], Odd, Some(6.3)),
    row("EM3", TwistedBb, (260, 4, 21, LE), (5, 13, 10), &["x4y", "x2y4"], &["x4", "1"], Odd, Some(6.8)),
    row("EM3", TwistedBb, (324, 8, 20, LE), (3, 27, 9), &["x2y", "y2"], &["xy2", "x2y2"], Odd, Some(9.9)),
    row("EM3", TwistedBb, (340, 4, 22, LE), (5, 17, 14), &["y4", "y3"], &["x4", "x3y"], Odd, Some(5.7)),
    row("EM3", TwistedBb, (372, 8, 18, LE), (3, 31, 16), &["xy2", "y2"], &["x2y2", "y"], Odd, Some(7.0)),
    row("EM3", TwistedBb, (24, 8, 4, X), (3, 2, 1), &["y2", "x2y"], &["y", "x"], Even, Some(5.3)),
    row("EM3", TwistedBb, (32, 12, 4, X), (2, 4, 1), &["xy", "1"], &["x", "1"], Even, Some(6.0)),
    row("EM3", TwistedBb, (48, 16, 4, X), (2, 6, 2), &["y", "xy"], &["xy", "x"], Even, Some(5.3)),
    row("EM3", TwistedBb, (56, 6, 8, X), (7, 2, 1), &["xy5", "x6y3"], &["x4y4", "x5y4"], Even, Some(6.9)),
    row("EM3", TwistedBb, (64, 8, 8, X), (2, 8, 5), &["y", "x"], &["xy", "1"], Even, Some(8.0)),
    row("EM3", TwistedBb, (72, 4, 10, X), (3, 6, 2), &["xy", "x2"], &["y2", "x2y2"], Even, Some(5.6)),
    row("EM3", TwistedBb, (80, 10, 8, X), (10, 2, 1), &["x9y3", "y8"], &["x5", "x2y9"], Even, Some(8.0)),
    row("EM3", TwistedBb, (104, 6, 12, X), (2, 13, 6), &["xy", "1"], &["x", "y"], Even, Some(8.3)),
    row("EM3", TwistedBb, (120, 8, 12, X), (3, 10, 7), &["x2", "x"], &["x2y", "xy2"], Even, Some(9.6)),
    row("EM3", TwistedBb, (136, 6, 12, X), (2, 17, 12), &["x", "y"], &["x", "1"], Even, Some(6.4)),
    row("EM3", TwistedBb, (160, 20, 8, X), (4, 10, 1), &["x2y", "y2"], &["x2y2", "1"], Even, Some(8.0)),
    row("EM3", TwistedBb, (216, 12, 12, LE), (6, 9, 3), &["x5y3", "x5y4"], &["y3", "x5y2"], Even, Some(8.0)),
    row("EM3", TwistedBb, (224, 16, 12, LE), (4, 14, 2), &["x3y2", "xy"], &["x3y3", "x3"], Even, Some(10.3)),
    row("EM3", TwistedBb, (240, 16, 12, LE), (6, 10, 2), &["y3", "x5y"], &["x4y2", "y5"], Even, Some(9.6)),
    row("EM3", TwistedBb, (288, 12, 16, LE), (8, 9, 1), &["x5y4", "y3"], &["x5y2", "x2y5"], Even, Some(10.7)),
    row("EM3", TwistedBb, (384, 8, 20, LE), (3, 32, 6), &["y", "xy2"], &["x2y", "xy2"], Even, Some(8.3)),
    // More double-layer reflection codes.
    row("EM4", Reflection, (28, 4, 5, X), (7, 1, 0), &["x2y2", "x5y6q"], &["x3y3q", "xy6q"], Odd, Some(3.6)),
    row("EM4", Reflection, (36, 12, 4, X), (3, 3, 0), &["pyq", "x"], &["pq", "xy2q"], Odd, Some(5.3)),
    row("EM4", Reflection, (44, 4, 7, X), (11, 1, 0), &["x9y8", "x2y3q"], &["xy2", "x7y2"], Odd, Some(4.5)),
    row("EM4", Reflection, (60, 12, 5, X), (15, 1, 0), &["y2", "x6y10"], &["x10y9q", "x7y7"], Odd, Some(5.0)),
    row("EM4", Reflection, (132, 4, 18, X), (11, 3, 0), &["x7y2", "x6"], &["x10y10q", "x7yq"], Odd, Some(9.8)),
    row("EM4", Reflection, (260, 4, 26, LE), (13, 5, 0), &["x12y7", "x7y3"], &["x10y2q", "x11y9q"], Odd, Some(10.4)),
    row("EM4", Reflection, (300, 4, 28, LE), (25, 3, 0), &["x3y5", "x24y4"], &["x14y6", "x19y2q"], Odd, Some(10.5)),
    row("EM4", Reflection, (324, 4, 28, LE), (27, 3, 0), &["x2y4", "x6y17"], &["x22y17q", "x16y14q"], Odd, Some(9.7)),
    row("EM4", Reflection, (348, 4, 35, LE), (29, 3, 0), &["x21y5", "x24y10q"], &["x27y19q", "x22y20"], Odd, Some(14.1)),
    row("EM4", Reflection, (380, 4, 58, LE), (5, 19, 0), &["x4y3", "x3py4"], &["xy", "x4y3"], Odd, Some(35.4)),
    row("EM4", Reflection, (24, 8, 4, X), (3, 2, 0), &["y2q", "xyq"], &["x2y", "q"], Even, Some(5.3)),
    row("EM4", Reflection, (32, 18, 4, X), (4, 2, 0), &["x3y3", "xpy3q"], &["x3py3", "x3"], Even, Some(9.0)),
    row("EM4", Reflection, (96, 20, 8, X), (4, 6, 0), &["x3py3", "xy"], &["x2y2", "x2y3"], Even, Some(13.3)),
    row("EM4", Reflection, (112, 8, 14, X), (14, 2, 0), &["x5y3", "x6q"], &["x10y12q", "x5y5q"], Even, Some(14.0)),
    row("EM4", Reflection, (120, 14, 10, X), (15, 2, 0), &["x11y14q", "x7y14"], &["x10y6", "x11y12q"], Even, Some(11.7)),
    row("EM4", Reflection, (160, 8, 16, X), (10, 4, 0), &["x2y8", "x6y"], &["x7y3q", "y5q"], Even, Some(12.8)),
    row("EM4", Reflection, (200, 4, 20, LE), (25, 2, 0), &["x15y2q", "x2y15q"], &["x4y22q", "x13y4q"], Even, Some(8.0)),
    row("EM4", Reflection, (256, 8, 20, LE), (32, 2, 0), &["x28y6", "x9y22q"], &["x13y26q", "x15y6q"], Even, Some(12.5)),
    row("EM4", Reflection, (312, 6, 30, LE), (13, 6, 0), &["x11y7q", "y5"], &["xy5", "x5y7q"], Even, Some(17.3)),
    row("EM4", Reflection, (384, 24, 16, LE), (24, 4, 0), &["x16y8", "x5y2"], &["x13y11q", "x10y11"], Even, Some(16.0)),
];

/// Entries of one table, e.g. `"T2"` or `"EM3"`.
pub fn table(name: &str) -> impl Iterator<Item = &'static TableEntry> + '_ {
    TABLE_ENTRIES.iter().filter(move |e| e.table == name)
}

/// First entry matching `[[n,k,d]]` and family.
pub fn find(family: Family, n: usize, k: usize, d: usize) -> Option<&'static TableEntry> {
    TABLE_ENTRIES.iter().find(|e| e.family == family && e.n == n && e.k == k && e.d == d)
}
