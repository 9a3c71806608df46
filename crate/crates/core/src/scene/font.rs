use std::collections::BTreeMap;

pub const GLYPH_W: usize = 5;
pub const GLYPH_H: usize = 7;

/// A 5×7 glyph, row-major, top row first.
pub type Glyph = [[bool; GLYPH_W]; GLYPH_H];

const ROWS: &[(char, [&str; GLYPH_H])] = &[
    ('A', [".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"]),
    ('B', ["####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."]),
    ('C', [".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."]),
    ('D', ["###..", "#..#.", "#...#", "#...#", "#...#", "#..#.", "###.."]),
    ('E', ["#####", "#....", "#....", "####.", "#....", "#....", "#####"]),
    ('F', ["#####", "#....", "#....", "####.", "#....", "#....", "#...."]),
    ('G', [".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"]),
    ('H', ["#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"]),
    ('I', [".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."]),
    ('J', ["..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."]),
    ('K', ["#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"]),
    ('L', ["#....", "#....", "#....", "#....", "#....", "#....", "#####"]),
    ('M', ["#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"]),
    ('N', ["#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"]),
    ('O', [".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."]),
    ('P', ["####.", "#...#", "#...#", "####.", "#....", "#....", "#...."]),
    ('Q', [".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"]),
    ('R', ["####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"]),
    ('S', [".####", "#....", "#....", ".###.", "....#", "....#", "####."]),
    ('T', ["#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."]),
    ('U', ["#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."]),
    ('V', ["#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."]),
    ('W', ["#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", ".#.#."]),
    ('X', ["#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"]),
    ('Y', ["#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."]),
    ('Z', ["#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"]),
    ('0', [".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."]),
    ('1', ["..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."]),
    ('2', [".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"]),
    ('3', ["#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."]),
    ('4', ["...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."]),
    ('5', ["#####", "#....", "####.", "....#", "....#", "#...#", ".###."]),
    ('6', ["..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."]),
    ('7', ["#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."]),
    ('8', [".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."]),
    ('9', [".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."]),
];

/// Fixed 5×7 bitmap font over A–Z and 0–9, used both to draw legends and
/// to read them back.
#[derive(Clone, Debug)]
pub struct GlyphFont {
    glyphs: BTreeMap<char, Glyph>,
}

impl Default for GlyphFont {
    fn default() -> Self {
        Self::standard()
    }
}

impl GlyphFont {
    pub fn standard() -> Self {
        let mut glyphs = BTreeMap::new();
        for (c, rows) in ROWS {
            let mut g = [[false; GLYPH_W]; GLYPH_H];
            for (y, row) in rows.iter().enumerate() {
                for (x, ch) in row.chars().enumerate() {
                    g[y][x] = ch == '#';
                }
            }
            glyphs.insert(*c, g);
        }
        GlyphFont { glyphs }
    }

    pub fn glyph(&self, c: char) -> Option<&Glyph> {
        self.glyphs.get(&c.to_ascii_uppercase())
    }

    pub fn chars(&self) -> impl Iterator<Item = (char, &Glyph)> {
        self.glyphs.iter().map(|(c, g)| (*c, g))
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.glyphs.is_empty()
    }
}

/// Number of the 35 cells on which two glyphs agree.
pub fn agreement(a: &Glyph, b: &Glyph) -> usize {
    (0..GLYPH_H).flat_map(|y| (0..GLYPH_W).map(move |x| (x, y))).filter(|&(x, y)| a[y][x] == b[y][x]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_36_glyphs_present_and_distinct() {
        let f = GlyphFont::standard();
        assert_eq!(f.len(), 36);
        let all: Vec<_> = f.chars().collect();
        for (i, (c, g)) in all.iter().enumerate() {
            for (d, h) in &all[i + 1..] {
                assert!(agreement(g, h) < 35, "{c} and {d} are identical");
            }
        }
    }

    #[test]
    fn no_glyph_is_mostly_ink() {
        // A solid blob must not be readable as a character.
        for (c, g) in GlyphFont::standard().chars() {
            let on = g.iter().flatten().filter(|b| **b).count();
            assert!(on < 26, "{c} has {on} lit cells");
        }
    }
}
