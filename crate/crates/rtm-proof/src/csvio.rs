//! CSV views of computed data.
//!
//! Trajectory files carry exact rationals only (`num/den` or integer text);
//! curve files carry decimal coordinates and mark every such column
//! `_nonrigorous`, because they come from floating-point trigonometry and
//! exist for plotting, not for verification.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use rtm_core::{Rational, Trajectory};

use crate::certificate::rat_str;

/// One parsed trajectory row: step index, time, state components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateRow {
    pub step: u64,
    pub t: Rational,
    pub state: Vec<Rational>,
}

/// Writes the captured states as `step,t,u1..un`, every entry an exact
/// rational.
pub fn write_trajectory(w: impl Write, t: &Trajectory) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let dim = t.start.len();
    let mut header = vec!["step".to_string(), "t".to_string()];
    header.extend((1..=dim).map(|i| format!("u{i}")));
    out.write_record(&header)?;
    for (idx, state) in &t.captured {
        let time = &Rational::from_integer(*idx as i64) * &t.step;
        let mut row = vec![idx.to_string(), rat_str(&time)];
        row.extend(state.iter().map(rat_str));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a file produced by [`write_trajectory`]. Accepts any column count
/// `>= 3` (step, t, then one column per component).
pub fn read_trajectory(r: impl Read) -> Result<Vec<StateRow>> {
    let mut input = csv::Reader::from_reader(r);
    {
        let header = input.headers().context("reading csv header")?;
        if header.len() < 3 || header.get(0) != Some("step") || header.get(1) != Some("t") {
            bail!("expected a trajectory csv with columns step,t,u1,...");
        }
    }
    let mut rows = Vec::new();
    for record in input.records() {
        let record = record.context("reading csv row")?;
        if record.len() < 3 {
            bail!("trajectory row with fewer than three columns");
        }
        let step: u64 = record[0].parse().context("step column")?;
        let t: Rational = record[1]
            .parse()
            .map_err(|e| anyhow::anyhow!("t column: {e}"))?;
        let state = record
            .iter()
            .skip(2)
            .map(|c| {
                c.parse::<Rational>()
                    .map_err(|e| anyhow::anyhow!("state column '{c}': {e}"))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(StateRow { step, t, state });
    }
    Ok(rows)
}

/// Maps states `(u1, u2) = (r, theta)` to points on the unit two-sphere,
/// `(sin r cos theta, sin r sin theta, cos r)`, with plain `f64`
/// trigonometry. Output columns are suffixed `_nonrigorous`; `digits` is the
/// number of decimal places printed.
pub fn write_curve(w: impl Write, rows: &[StateRow], digits: usize) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "step",
        "t",
        "x_nonrigorous",
        "y_nonrigorous",
        "z_nonrigorous",
    ])?;
    for row in rows {
        if row.state.len() < 2 {
            bail!("curve mapping needs at least two state components");
        }
        let r = row.state[0].to_f64_lossy();
        let theta = row.state[1].to_f64_lossy();
        let (x, y, z) = (r.sin() * theta.cos(), r.sin() * theta.sin(), r.cos());
        out.write_record([
            row.step.to_string(),
            rat_str(&row.t),
            format!("{x:.digits$}"),
            format!("{y:.digits$}"),
            format!("{z:.digits$}"),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rtm_core::{rtm_run, CaptureMode, GridSpec, InitialValue, RtmConfig};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn trajectory_roundtrips_exactly() {
        let mut cfg = RtmConfig::new(
            1,
            q("1/100"),
            5,
            Some(GridSpec::decimal(6)),
            vec![InitialValue::Exact(q("1/2"))],
        );
        cfg.capture = CaptureMode::Full;
        let t = rtm_run(&rtm_core::fields::LogisticField, &cfg).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("step,t,u1\n"));
        assert!(text.contains("0,0/1,1/2\n"));

        let rows = read_trajectory(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].state, vec![q("1/2")]);
        assert_eq!(rows[5].step, 5);
        assert_eq!(rows[5].t, q("1/20"));
        assert_eq!(rows[5].state, t.end);
    }

    #[test]
    fn curve_maps_known_points() {
        let rows = vec![
            StateRow {
                step: 0,
                t: Rational::zero(),
                // r = pi/2, theta = pi/4: the point (√2/2, √2/2, 0).
                state: vec![q("1.5707963267948966"), q("0.7853981633974483")],
            },
            StateRow {
                step: 1,
                t: q("1/100"),
                state: vec![q("1.5707963267948966"), q("0.5204")],
            },
        ];
        let mut buf = Vec::new();
        write_curve(&mut buf, &rows, 4).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "step,t,x_nonrigorous,y_nonrigorous,z_nonrigorous"
        );
        assert_eq!(lines.next().unwrap(), "0,0/1,0.7071,0.7071,0.0000");
        assert_eq!(lines.next().unwrap(), "1,1/100,0.8676,0.4972,0.0000");
    }

    #[test]
    fn empty_and_malformed_inputs() {
        let empty = "step,t,u1,u2\n";
        let rows = read_trajectory(empty.as_bytes()).unwrap();
        assert!(rows.is_empty());
        let mut buf = Vec::new();
        write_curve(&mut buf, &rows, 4).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "step,t,x_nonrigorous,y_nonrigorous,z_nonrigorous\n"
        );

        assert!(read_trajectory("a,b\n1,2\n".as_bytes()).is_err());
        assert!(read_trajectory("step,t,u1\nx,0,1/2\n".as_bytes()).is_err());
        let one_dim = vec![StateRow {
            step: 0,
            t: Rational::zero(),
            state: vec![q("1/2")],
        }];
        assert!(write_curve(Vec::new(), &one_dim, 4).is_err());
    }
}
