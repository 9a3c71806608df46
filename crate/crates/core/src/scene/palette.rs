use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub type Rgb = [u8; 3];

/// Canvas colour around the sign. Deliberately outside every colour class.
pub const BACKGROUND: Rgb = [128, 128, 128];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedColor {
    Red,
    White,
    Blue,
    Yellow,
    Black,
    Green,
    Orange,
}

impl NamedColor {
    pub const ALL: [NamedColor; 7] = [
        NamedColor::Red,
        NamedColor::White,
        NamedColor::Blue,
        NamedColor::Yellow,
        NamedColor::Black,
        NamedColor::Green,
        NamedColor::Orange,
    ];

    pub fn rgb(self) -> Rgb {
        match self {
            NamedColor::Red => [204, 0, 0],
            NamedColor::White => [255, 255, 255],
            NamedColor::Blue => [0, 64, 204],
            NamedColor::Yellow => [255, 204, 0],
            NamedColor::Black => [0, 0, 0],
            NamedColor::Green => [0, 153, 0],
            NamedColor::Orange => [255, 128, 0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedColor::Red => "red",
            NamedColor::White => "white",
            NamedColor::Blue => "blue",
            NamedColor::Yellow => "yellow",
            NamedColor::Black => "black",
            NamedColor::Green => "green",
            NamedColor::Orange => "orange",
        }
    }
}

impl fmt::Display for NamedColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedColor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedColor::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown colour '{s}'"))
    }
}

fn dist2(a: Rgb, b: Rgb) -> u32 {
    a.iter().zip(&b).map(|(&x, &y)| (x as i32 - y as i32).pow(2) as u32).sum()
}

/// The palette colour nearest to `px`, or `None` when the background grey
/// is nearer than any palette entry.
pub fn nearest(px: Rgb) -> Option<NamedColor> {
    let (best, d) = NamedColor::ALL.into_iter().map(|c| (c, dist2(px, c.rgb()))).min_by_key(|&(_, d)| d).unwrap();
    (d < dist2(px, BACKGROUND)).then_some(best)
}
