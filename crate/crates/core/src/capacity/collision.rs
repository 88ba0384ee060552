//! Two-vehicle rear-end collision margin as a deterministic risk mapper.
//!
//! ```text
//! y = v2·h2 + v1²/(2·a1) − v2·r2 − v2²/(2·a2)
//! ```
//!
//! `y > 0` means the follower stops short of the leader; `y ≤ 0` is a collision.
//! Units are SI: m/s, m/s², s, and metres for `y`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::DeterministicMapper;
use crate::prob::Alphabet;
use crate::{Error, Result};

pub const COLLISION: &str = "collision";
pub const NO_COLLISION: &str = "no_collision";
const MAX_CELLS: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionScenario {
    /// Lead vehicle initial speed.
    pub v1: f64,
    /// Following vehicle initial speed.
    pub v2: f64,
    /// Lead braking deceleration, > 0.
    pub a1: f64,
    /// Follower braking deceleration, > 0.
    pub a2: f64,
    /// Time headway of the follower.
    pub h2: f64,
    /// Follower reaction time.
    pub r2: f64,
}

impl CollisionScenario {
    pub fn new(v1: f64, v2: f64, a1: f64, a2: f64, h2: f64, r2: f64) -> Result<Self> {
        let s = Self { v1, v2, a1, a2, h2, r2 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("v1", self.v1),
            ("v2", self.v2),
            ("a1", self.a1),
            ("a2", self.a2),
            ("h2", self.h2),
            ("r2", self.r2),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidScenario(format!("{name} is not finite")));
            }
            let ok = if name.starts_with('a') { v > 0.0 } else { v >= 0.0 };
            if !ok {
                return Err(Error::InvalidScenario(format!("{name} = {v} out of range")));
            }
        }
        Ok(())
    }

    fn set(&mut self, field: &str, value: f64) -> Result<()> {
        let slot = match field {
            "v1" => &mut self.v1,
            "v2" => &mut self.v2,
            "a1" => &mut self.a1,
            "a2" => &mut self.a2,
            "h2" => &mut self.h2,
            "r2" => &mut self.r2,
            other => return Err(Error::InvalidParameter(format!("unknown scenario field `{other}`"))),
        };
        *slot = value;
        Ok(())
    }

    fn label(&self) -> String {
        format!(
            "v1={:.6};v2={:.6};a1={:.6};a2={:.6};h2={:.6};r2={:.6}",
            self.v1, self.v2, self.a1, self.a2, self.h2, self.r2
        )
    }
}

/// Stopping-distance margin in metres.
///
/// The headway and reaction terms share the factor `v2` and are grouped, as are
/// the two braking distances, so equal speeds, decelerations and `h2 == r2`
/// give exactly zero.
pub fn collision_margin(s: &CollisionScenario) -> f64 {
    let following = s.v2 * (s.h2 - s.r2);
    let braking = s.v1 * s.v1 / (2.0 * s.a1) - s.v2 * s.v2 / (2.0 * s.a2);
    following + braking
}

/// `y ≤ 0`, boundary included.
pub fn is_collision(margin: f64) -> bool {
    margin <= 0.0
}

/// One scenario field: a sweep `{min, max, steps}` or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridAxis {
    Range { min: f64, max: f64, steps: usize },
    Value(f64),
}

impl GridAxis {
    fn points(&self, field: &str) -> Result<Vec<f64>> {
        match *self {
            GridAxis::Value(v) => Ok(vec![v]),
            GridAxis::Range { min, max, steps } => {
                if steps == 0 || !(min <= max) {
                    return Err(Error::EmptyRange(field.to_owned()));
                }
                if steps == 1 {
                    return Ok(vec![min]);
                }
                let span = max - min;
                Ok((0..steps)
                    .map(|i| {
                        if i == steps - 1 {
                            max
                        } else {
                            min + span * i as f64 / (steps - 1) as f64
                        }
                    })
                    .collect())
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            GridAxis::Value(_) => 1,
            GridAxis::Range { steps, .. } => *steps,
        }
    }
}

/// Grid definition, one axis per scenario field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollisionGrid {
    pub v1: GridAxis,
    pub v2: GridAxis,
    pub a1: GridAxis,
    pub a2: GridAxis,
    pub h2: GridAxis,
    pub r2: GridAxis,
}

impl CollisionGrid {
    pub fn single(s: &CollisionScenario) -> Self {
        Self {
            v1: GridAxis::Value(s.v1),
            v2: GridAxis::Value(s.v2),
            a1: GridAxis::Value(s.a1),
            a2: GridAxis::Value(s.a2),
            h2: GridAxis::Value(s.h2),
            r2: GridAxis::Value(s.r2),
        }
    }

    fn axes(&self) -> [(&'static str, GridAxis); 6] {
        [
            ("v1", self.v1),
            ("v2", self.v2),
            ("a1", self.a1),
            ("a2", self.a2),
            ("h2", self.h2),
            ("r2", self.r2),
        ]
    }

    pub fn cell_count(&self) -> u128 {
        self.axes().iter().map(|(_, a)| a.len() as u128).product()
    }
}

/// Every grid cell with its margin and the induced deterministic mapper.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionSweep {
    pub mapper: DeterministicMapper,
    pub scenarios: Vec<CollisionScenario>,
    pub margins: Vec<f64>,
}

impl CollisionSweep {
    /// Number of colliding cells.
    pub fn collisions(&self) -> usize {
        self.margins.iter().filter(|&&y| is_collision(y)).count()
    }

    /// CSV with header `v1,v2,a1,a2,h2,r2,y,collision`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["v1", "v2", "a1", "a2", "h2", "r2", "y", "collision"])?;
        for (s, y) in self.scenarios.iter().zip(&self.margins) {
            w.write_record(&[
                s.v1.to_string(),
                s.v2.to_string(),
                s.a1.to_string(),
                s.a2.to_string(),
                s.h2.to_string(),
                s.r2.to_string(),
                y.to_string(),
                is_collision(*y).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evaluates the margin on every cell of `grid`, after replacing the axes named
/// in `fixed` by single values. Cells are ordered with `r2` varying fastest.
pub fn collision_channel(grid: &CollisionGrid, fixed: &[(&str, f64)]) -> Result<CollisionSweep> {
    let mut grid = *grid;
    for &(field, value) in fixed {
        let axis = match field {
            "v1" => &mut grid.v1,
            "v2" => &mut grid.v2,
            "a1" => &mut grid.a1,
            "a2" => &mut grid.a2,
            "h2" => &mut grid.h2,
            "r2" => &mut grid.r2,
            other => return Err(Error::InvalidParameter(format!("unknown scenario field `{other}`"))),
        };
        *axis = GridAxis::Value(value);
    }
    let cells = grid.cell_count();
    if cells > MAX_CELLS {
        return Err(Error::GridTooLarge(cells));
    }
    let axes = grid.axes();
    let points: Vec<(&str, Vec<f64>)> = axes
        .iter()
        .map(|(name, axis)| axis.points(name).map(|p| (*name, p)))
        .collect::<Result<_>>()?;

    let mut scenarios = Vec::with_capacity(cells as usize);
    let mut index = [0usize; 6];
    loop {
        let mut s = CollisionScenario {
            v1: 0.0,
            v2: 0.0,
            a1: 1.0,
            a2: 1.0,
            h2: 0.0,
            r2: 0.0,
        };
        for (k, (name, pts)) in points.iter().enumerate() {
            s.set(name, pts[index[k]])?;
        }
        s.validate()?;
        scenarios.push(s);
        // odometer increment, last axis fastest
        let mut k = 5;
        loop {
            index[k] += 1;
            if index[k] < points[k].1.len() {
                break;
            }
            index[k] = 0;
            if k == 0 {
                return finish(scenarios);
            }
            k -= 1;
        }
    }
}

fn finish(scenarios: Vec<CollisionScenario>) -> Result<CollisionSweep> {
    let margins: Vec<f64> = scenarios.iter().map(collision_margin).collect();
    let input = Alphabet::new(scenarios.iter().map(CollisionScenario::label))?;
    let output = Alphabet::new([COLLISION, NO_COLLISION])?;
    let table = margins.iter().map(|&y| usize::from(!is_collision(y))).collect();
    Ok(CollisionSweep {
        mapper: DeterministicMapper::new(input, output, table)?,
        scenarios,
        margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::deterministic_capacity;
    use crate::prob::FiniteDistribution;

    #[test]
    fn documented_scenarios() {
        let safe = CollisionScenario::new(20.0, 20.0, 6.0, 6.0, 1.5, 1.0).unwrap();
        let y = collision_margin(&safe);
        assert!((y - 10.0).abs() < 1e-9);
        assert!(!is_collision(y));

        let boundary = CollisionScenario::new(20.0, 20.0, 6.0, 6.0, 1.2, 1.2).unwrap();
        assert_eq!(collision_margin(&boundary), 0.0);
        assert!(is_collision(collision_margin(&boundary)));

        let stopped_lead = CollisionScenario::new(0.0, 20.0, 6.0, 6.0, 1.0, 1.0).unwrap();
        let y = collision_margin(&stopped_lead);
        assert!((y - (-100.0 / 3.0)).abs() < 1e-9);
        assert!(is_collision(y));
    }

    #[test]
    fn margin_is_bitwise_deterministic() {
        let s = CollisionScenario::new(17.3, 24.1, 7.2, 5.9, 1.1, 0.8).unwrap();
        assert_eq!(collision_margin(&s).to_bits(), collision_margin(&s).to_bits());
    }

    #[test]
    fn invalid_scenarios() {
        assert!(CollisionScenario::new(20.0, 20.0, 0.0, 6.0, 1.0, 1.0).is_err());
        assert!(CollisionScenario::new(-1.0, 20.0, 6.0, 6.0, 1.0, 1.0).is_err());
        assert!(CollisionScenario::new(20.0, f64::NAN, 6.0, 6.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn single_cell_grid_is_constant() {
        let s = CollisionScenario::new(20.0, 20.0, 6.0, 6.0, 1.5, 1.0).unwrap();
        let sweep = collision_channel(&CollisionGrid::single(&s), &[]).unwrap();
        assert_eq!(sweep.mapper.table(), &[1]);
        let u = FiniteDistribution::uniform(sweep.mapper.input().clone());
        assert_eq!(deterministic_capacity(&sweep.mapper, &u).unwrap().h_y, 0.0);
    }

    #[test]
    fn two_cell_grid_is_one_bit() {
        let s = CollisionScenario::new(20.0, 20.0, 6.0, 6.0, 1.5, 1.0).unwrap();
        let grid = CollisionGrid {
            v1: GridAxis::Range { min: 0.0, max: 20.0, steps: 2 },
            ..CollisionGrid::single(&s)
        };
        let sweep = collision_channel(&grid, &[]).unwrap();
        assert_eq!(sweep.mapper.table(), &[0, 1]);
        let u = FiniteDistribution::uniform(sweep.mapper.input().clone());
        let r = deterministic_capacity(&sweep.mapper, &u).unwrap();
        assert!((r.i_xy - 1.0).abs() < 1e-15 && (r.h_y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overrides_and_errors() {
        let s = CollisionScenario::new(20.0, 20.0, 6.0, 6.0, 1.5, 1.0).unwrap();
        let grid = CollisionGrid {
            h2: GridAxis::Range { min: 0.0, max: 3.0, steps: 4 },
            ..CollisionGrid::single(&s)
        };
        assert_eq!(collision_channel(&grid, &[("h2", 2.0)]).unwrap().scenarios.len(), 1);
        assert!(matches!(collision_channel(&grid, &[("speed", 2.0)]), Err(Error::InvalidParameter(_))));

        let empty = CollisionGrid { h2: GridAxis::Range { min: 3.0, max: 0.0, steps: 4 }, ..grid };
        assert!(matches!(collision_channel(&empty, &[]), Err(Error::EmptyRange(f)) if f == "h2"));
        let zero = CollisionGrid { h2: GridAxis::Range { min: 0.0, max: 1.0, steps: 0 }, ..grid };
        assert!(matches!(collision_channel(&zero, &[]), Err(Error::EmptyRange(_))));

        let wide = GridAxis::Range { min: 0.0, max: 30.0, steps: 11 };
        let big = CollisionGrid { v1: wide, v2: wide, a1: GridAxis::Range { min: 1.0, max: 8.0, steps: 11 }, a2: GridAxis::Range { min: 1.0, max: 8.0, steps: 11 }, h2: wide, r2: wide };
        assert!(matches!(collision_channel(&big, &[]), Err(Error::GridTooLarge(1_771_561))));

        let bad_a = CollisionGrid { a1: GridAxis::Range { min: 0.0, max: 6.0, steps: 2 }, ..grid };
        assert!(matches!(collision_channel(&bad_a, &[]), Err(Error::InvalidScenario(_))));
    }

    #[test]
    fn grid_json_and_csv() {
        let grid: CollisionGrid = serde_json::from_str(
            r#"{"v1":20,"v2":20,"a1":6,"a2":6,"h2":{"min":0,"max":3,"steps":2},"r2":1}"#,
        )
        .unwrap();
        let sweep = collision_channel(&grid, &[]).unwrap();
        let mut buf = Vec::new();
        sweep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "v1,v2,a1,a2,h2,r2,y,collision\n20,20,6,6,0,1,-20,true\n20,20,6,6,3,1,40,false\n"
        );
        assert_eq!(sweep.mapper.input().label(1), "v1=20.000000;v2=20.000000;a1=6.000000;a2=6.000000;h2=3.000000;r2=1.000000");
    }
}
