//! Self-similar partition of a simplex whose cells are labelled by digit
//! strings `a_0 a_1 …`, and its SVG rendering.
//!
//! Branching 4 splits a triangle at its edge midpoints. For a triangle with
//! vertices `(A, B, C)` the children are
//!
//! * `0`: the central triangle `(m_BC, m_CA, m_AB)`,
//! * `1`: the corner at `A`, `(A, m_AB, m_CA)`,
//! * `2`: the corner at `B`, `(m_AB, B, m_BC)`,
//! * `3`: the corner at `C`, `(m_CA, m_BC, C)`,
//!
//! where `m_XY` is the midpoint of `XY`. Every other branching `p` cuts the unit
//! interval into `p` equal pieces, digit `a` taking the `a`-th piece from the left.

use std::fmt::Write as _;

use thiserror::Error;

/// Upper bound on the number of rendered cells.
pub const MAX_CELLS: usize = 1 << 20;

const SIDE: f64 = 800.0;
const STRIP: f64 = 80.0;
const MARGIN: f64 = 10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimplexError {
    #[error("branching must be at least 2, got {0}")]
    InvalidBranching(u32),
    #[error("digit {digit} out of range for branching {branching}")]
    DigitOutOfRange { digit: u32, branching: u32 },
    #[error("address has {got} digits, expected {expected}")]
    AddressLength { expected: usize, got: usize },
    #[error("{branching}^{depth} cells exceed the limit of {MAX_CELLS}")]
    TooManyCells { branching: u32, depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Triangle,
    Interval,
}

impl Shape {
    pub fn for_branching(branching: u32) -> Shape {
        if branching == 4 {
            Shape::Triangle
        } else {
            Shape::Interval
        }
    }
}

pub type Point = (f64, f64);

/// One cell of the partition as a polygon in SVG coordinates (`y` down).
/// Interval cells are rectangles of a fixed height.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub address: Vec<u32>,
    pub polygon: Vec<Point>,
}

fn mid(a: Point, b: Point) -> Point {
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

fn root_polygon(shape: Shape) -> Vec<Point> {
    match shape {
        Shape::Triangle => {
            let h = SIDE * 3f64.sqrt() / 2.0;
            vec![(0.0, h), (SIDE, h), (SIDE / 2.0, 0.0)]
        }
        Shape::Interval => vec![(0.0, 0.0), (SIDE, 0.0), (SIDE, STRIP), (0.0, STRIP)],
    }
}

fn child(shape: Shape, branching: u32, parent: &[Point], digit: u32) -> Vec<Point> {
    match shape {
        Shape::Triangle => {
            let (a, b, c) = (parent[0], parent[1], parent[2]);
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            match digit {
                0 => vec![bc, ca, ab],
                1 => vec![a, ab, ca],
                2 => vec![ab, b, bc],
                _ => vec![ca, bc, c],
            }
        }
        Shape::Interval => {
            let (lo, hi) = (parent[0].0, parent[1].0);
            let w = (hi - lo) / branching as f64;
            let (l, r) = (lo + w * digit as f64, lo + w * (digit + 1) as f64);
            vec![(l, 0.0), (r, 0.0), (r, STRIP), (l, STRIP)]
        }
    }
}

/// Shoelace area.
pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum();
    twice.abs() / 2.0
}

fn check_address(branching: u32, address: &[u32]) -> Result<(), SimplexError> {
    if branching < 2 {
        return Err(SimplexError::InvalidBranching(branching));
    }
    match address.iter().find(|&&d| d >= branching) {
        Some(&digit) => Err(SimplexError::DigitOutOfRange { digit, branching }),
        None => Ok(()),
    }
}

/// The cell reached by following `address` from the root.
pub fn cell(branching: u32, address: &[u32]) -> Result<Cell, SimplexError> {
    check_address(branching, address)?;
    let shape = Shape::for_branching(branching);
    let polygon = address
        .iter()
        .fold(root_polygon(shape), |poly, &d| child(shape, branching, &poly, d));
    Ok(Cell {
        address: address.to_vec(),
        polygon,
    })
}

/// Area of the addressed cell over the area of the root.
pub fn area_fraction(branching: u32, address: &[u32]) -> Result<f64, SimplexError> {
    let c = cell(branching, address)?;
    Ok(polygon_area(&c.polygon) / polygon_area(&root_polygon(Shape::for_branching(branching))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub branching: u32,
    pub depth: usize,
    pub shape: Shape,
    pub root: Vec<Point>,
    /// Cells at the final depth, addresses in lexicographic order.
    pub cells: Vec<Cell>,
}

impl Partition {
    pub fn new(branching: u32, depth: usize) -> Result<Self, SimplexError> {
        if branching < 2 {
            return Err(SimplexError::InvalidBranching(branching));
        }
        u32::try_from(depth)
            .ok()
            .and_then(|d| (branching as usize).checked_pow(d))
            .filter(|&n| n <= MAX_CELLS)
            .ok_or(SimplexError::TooManyCells { branching, depth })?;
        let shape = Shape::for_branching(branching);
        let root = root_polygon(shape);
        let mut cells = vec![Cell {
            address: Vec::new(),
            polygon: root.clone(),
        }];
        for _ in 0..depth {
            cells = cells
                .into_iter()
                .flat_map(|c| {
                    (0..branching).map(move |d| {
                        let mut address = c.address.clone();
                        address.push(d);
                        Cell {
                            address,
                            polygon: child(shape, branching, &c.polygon, d),
                        }
                    })
                })
                .collect();
        }
        Ok(Partition {
            branching,
            depth,
            shape,
            root,
            cells,
        })
    }

    /// True when the branching has no faithful picture and the interval is used instead.
    pub fn is_fallback(&self) -> bool {
        self.shape == Shape::Interval && self.branching != 2
    }

    /// SVG document with one `<polygon>` per cell. The cell matching
    /// `highlight` gets `class="highlight"`, all others `class="cell"`.
    pub fn to_svg(&self, highlight: Option<&[u32]>) -> Result<String, SimplexError> {
        if let Some(h) = highlight {
            check_address(self.branching, h)?;
            if h.len() != self.depth {
                return Err(SimplexError::AddressLength {
                    expected: self.depth,
                    got: h.len(),
                });
            }
        }
        let (width, height) = match self.shape {
            Shape::Triangle => (SIDE, SIDE * 3f64.sqrt() / 2.0),
            Shape::Interval => (SIDE, STRIP),
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" data-branching="{}" data-depth="{}">"#,
            -MARGIN,
            -MARGIN,
            width + 2.0 * MARGIN,
            height + 2.0 * MARGIN,
            self.branching,
            self.depth
        );
        if self.is_fallback() {
            let _ = writeln!(
                out,
                "<!-- no simplex picture for branching {}; showing the interval partition -->",
                self.branching
            );
        }
        out.push_str(
            "<style>.cell{fill:#f4f4f4;stroke:#333;stroke-width:0.5}.highlight{fill:#e8742a;stroke:#333;stroke-width:0.5}</style>\n",
        );
        for c in &self.cells {
            let class = if highlight == Some(c.address.as_slice()) {
                "highlight"
            } else {
                "cell"
            };
            let points: Vec<String> = c.polygon.iter().map(|(x, y)| format!("{x},{y}")).collect();
            let label: Vec<String> = c.address.iter().map(u32::to_string).collect();
            let _ = writeln!(
                out,
                r#"<polygon class="{class}" data-address="{}" points="{}"/>"#,
                label.join("."),
                points.join(" ")
            );
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: Point, b: Point) -> f64 {
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    }

    #[test]
    fn four_way_split() {
        let part = Partition::new(4, 1).unwrap();
        assert_eq!(part.cells.len(), 4);
        let total: f64 = part.cells.iter().map(|c| polygon_area(&c.polygon)).sum();
        assert!((total - polygon_area(&part.root)).abs() < 1e-9);
        let root = Partition::new(4, 0).unwrap();
        assert_eq!(root.cells.len(), 1);
        assert_eq!(root.cells[0].polygon, root.root);
    }

    #[test]
    fn triangle_cells_are_equilateral_with_halved_sides() {
        for depth in 1..=4 {
            let side = SIDE / 2f64.powi(depth as i32);
            for c in Partition::new(4, depth).unwrap().cells {
                let v = &c.polygon;
                for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                    assert!((dist(v[a], v[b]) - side).abs() < 1e-9);
                }
                // area of an equilateral triangle of that side, as a fraction of the root
                let frac = polygon_area(v) / (3f64.sqrt() / 4.0 * SIDE * SIDE);
                assert!((frac - 4f64.powi(-(depth as i32))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn area_fraction_is_branching_power() {
        for (b, address) in [(4, vec![0, 3, 1]), (2, vec![1, 0, 1, 1]), (3, vec![2, 2]), (4, vec![])] {
            let f = area_fraction(b, &address).unwrap();
            assert!((f - (b as f64).powi(-(address.len() as i32))).abs() < 1e-12);
        }
        assert_eq!(
            area_fraction(4, &[0, 4]),
            Err(SimplexError::DigitOutOfRange { digit: 4, branching: 4 })
        );
    }

    #[test]
    fn corner_children_keep_their_vertex() {
        let root = root_polygon(Shape::Triangle);
        for k in 0..3 {
            let c = cell(4, &[k as u32 + 1, k as u32 + 1]).unwrap();
            assert!(c.polygon.contains(&root[k]));
        }
    }

    #[test]
    fn interval_labels_run_left_to_right() {
        let c = cell(2, &[1, 0]).unwrap();
        assert_eq!(c.polygon[0].0, SIDE / 2.0);
        assert_eq!(c.polygon[1].0, SIDE * 3.0 / 4.0);
    }

    #[test]
    fn svg_output() {
        let part = Partition::new(4, 2).unwrap();
        let svg = part.to_svg(Some(&[3, 0])).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 16);
        assert_eq!(svg.matches("class=\"highlight\"").count(), 1);
        assert!(svg.contains("class=\"highlight\" data-address=\"3.0\""));
        assert!(!svg.contains("no simplex picture"));
        assert!(part.to_svg(Some(&[3])).is_err());

        let odd = Partition::new(3, 1).unwrap();
        assert!(odd.is_fallback());
        assert!(odd.to_svg(None).unwrap().contains("no simplex picture"));
        assert!(!Partition::new(2, 3).unwrap().is_fallback());
        assert!(matches!(Partition::new(4, 30), Err(SimplexError::TooManyCells { .. })));
        assert_eq!(Partition::new(1, 1), Err(SimplexError::InvalidBranching(1)));
    }
}
