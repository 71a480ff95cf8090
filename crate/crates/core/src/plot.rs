//! Standalone SVG renderings of `ψ` step functions. Output depends only on
//! the input, so repeated runs are byte-identical.

use std::fmt::Write as _;

use crate::perm::TupleContext;
use crate::psi::StepTrajectory;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const MARGIN: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    pub log_x: bool,
    pub log_y: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            width: 800,
            height: 500,
            log_x: true,
            log_y: true,
        }
    }
}

struct Frame {
    opts: PlotOptions,
    t_range: (f64, f64),
    y_range: (f64, f64),
}

impl Frame {
    fn new(opts: PlotOptions, t_max: u64, curves: &[&StepTrajectory]) -> Self {
        let values = curves.iter().flat_map(|c| c.breakpoints().iter().map(|b| b.xi.approx()));
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !opts.log_y {
            lo = 0.0;
        }
        if lo >= hi {
            hi = lo * 2.0 + 1e-12;
        }
        Frame {
            opts,
            t_range: (1.0, (t_max as f64).max(2.0)),
            y_range: (lo, hi),
        }
    }

    fn scale(v: f64, (lo, hi): (f64, f64), log: bool) -> f64 {
        if log {
            (v.ln() - lo.ln()) / (hi.ln() - lo.ln())
        } else {
            (v - lo) / (hi - lo)
        }
    }

    fn x(&self, t: f64) -> f64 {
        let w = self.opts.width as f64 - 2.0 * MARGIN;
        MARGIN + w * Self::scale(t, self.t_range, self.opts.log_x)
    }

    fn y(&self, v: f64) -> f64 {
        let h = self.opts.height as f64 - 2.0 * MARGIN;
        MARGIN + h * (1.0 - Self::scale(v, self.y_range, self.opts.log_y))
    }

    fn open(&self, out: &mut String, title: &str) {
        let (w, h) = (self.opts.width, self.opts.height);
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
        )
        .unwrap();
        writeln!(out, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>").unwrap();
        writeln!(
            out,
            "<text x=\"{:.2}\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\">{}</text>",
            MARGIN,
            escape(title)
        )
        .unwrap();
        let (x0, x1) = (MARGIN, w as f64 - MARGIN);
        let (y0, y1) = (MARGIN, h as f64 - MARGIN);
        writeln!(
            out,
            "<path d=\"M {x0:.2} {y0:.2} L {x0:.2} {y1:.2} L {x1:.2} {y1:.2}\" stroke=\"black\" fill=\"none\"/>"
        )
        .unwrap();
        let scale = |log: bool| if log { "log" } else { "linear" };
        writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">t ({}) 1..{}</text>",
            x1,
            y1 + 30.0,
            scale(self.opts.log_x),
            self.t_range.1
        )
        .unwrap();
        writeln!(
            out,
            "<text x=\"10\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">psi ({})</text>",
            y0 - 10.0,
            scale(self.opts.log_y)
        )
        .unwrap();
    }

    fn steps(&self, out: &mut String, traj: &StepTrajectory, t_max: u64, color: &str) {
        let bps = traj.breakpoints();
        let mut d = String::new();
        for (i, b) in bps.iter().enumerate() {
            if b.q > t_max {
                break;
            }
            let v = b.xi.approx();
            let end = bps.get(i + 1).map_or(t_max, |n| n.q.min(t_max));
            let (x, y, xe) = (self.x(b.q as f64), self.y(v), self.x(end as f64));
            if i == 0 {
                write!(d, "M {x:.2} {y:.2}").unwrap();
            } else {
                write!(d, " L {x:.2} {y:.2}").unwrap();
            }
            write!(d, " L {xe:.2} {y:.2}").unwrap();
        }
        writeln!(out, "<path d=\"{d}\" stroke=\"{color}\" stroke-width=\"1.5\" fill=\"none\"/>").unwrap();
    }

    fn marker(&self, out: &mut String, t: u64, color: &str) {
        let x = self.x(t as f64);
        writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-dasharray=\"4 3\" stroke-width=\"0.8\"/>",
            MARGIN,
            self.opts.height as f64 - MARGIN
        )
        .unwrap();
    }

    fn legend(&self, out: &mut String, row: usize, name: &str, color: &str) {
        let x = self.opts.width as f64 - MARGIN - 150.0;
        let y = MARGIN + 15.0 + 18.0 * row as f64;
        writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{}</text>",
            escape(name)
        )
        .unwrap();
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

/// Times in `[1, t_max]` where at least two members jump.
pub fn shared_denominators(ctx: &TupleContext, t_max: u64) -> Vec<u64> {
    let mut all: Vec<u64> = ctx
        .trajectories()
        .iter()
        .flat_map(|tr| tr.jump_times(0, t_max))
        .collect();
    all.sort_unstable();
    let mut shared: Vec<u64> = all.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect();
    shared.dedup();
    shared
}

/// One member's step function with dashed lines at its own breakpoints.
pub fn render_member(traj: &StepTrajectory, name: &str, t_max: u64, opts: PlotOptions) -> String {
    let frame = Frame::new(opts, t_max, &[traj]);
    let mut out = String::new();
    frame.open(&mut out, &format!("psi for {name} = {}", traj.owner()));
    for t in traj.jump_times(1, t_max) {
        frame.marker(&mut out, t, "#bbbbbb");
    }
    frame.steps(&mut out, traj, t_max, color(0));
    frame.legend(&mut out, 0, name, color(0));
    out.push_str("</svg>\n");
    out
}

/// All members overlaid, with dashed lines at shared denominators.
pub fn render_tuple(ctx: &TupleContext, opts: PlotOptions) -> String {
    let t_max = ctx.t_max();
    let trajs: Vec<&StepTrajectory> = ctx.trajectories().iter().collect();
    let frame = Frame::new(opts, t_max, &trajs);
    let mut out = String::new();
    frame.open(&mut out, "psi step functions");
    for t in shared_denominators(ctx, t_max) {
        frame.marker(&mut out, t, "#555555");
    }
    if ctx.burn_in() > 1 {
        frame.marker(&mut out, ctx.burn_in(), "#e377c2");
    }
    for (i, (tr, m)) in ctx.trajectories().iter().zip(ctx.members()).enumerate() {
        frame.steps(&mut out, tr, t_max, color(i));
        frame.legend(&mut out, i, &m.name, color(i));
    }
    out.push_str("</svg>\n");
    out
}

/// `(file name, contents)` for each member plus `tuple.svg`.
pub fn plot_files(ctx: &TupleContext, opts: PlotOptions) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = ctx
        .members()
        .iter()
        .zip(ctx.trajectories())
        .map(|(m, tr)| (format!("{}.svg", m.name), render_member(tr, &m.name, ctx.t_max(), opts)))
        .collect();
    files.push(("tuple.svg".to_string(), render_tuple(ctx, opts)));
    files
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::ContinuedFraction;
    use crate::perm::{AnalysisConfig, Member};

    fn ctx() -> TupleContext {
        let members = vec![
            Member::from_cf("phi", ContinuedFraction::periodic(1, &[], &[1]).unwrap()),
            Member::from_cf("sqrt2", ContinuedFraction::periodic(1, &[], &[2]).unwrap()),
        ];
        let config = AnalysisConfig {
            t_max: 1000,
            burn_in: Some(1),
            ..AnalysisConfig::default()
        };
        TupleContext::new(members, &config).unwrap()
    }

    #[test]
    fn shared_times() {
        assert_eq!(shared_denominators(&ctx(), 1000), vec![1, 2, 5]);
    }

    #[test]
    fn files_are_deterministic() {
        let c = ctx();
        let a = plot_files(&c, PlotOptions::default());
        let b = plot_files(&c, PlotOptions::default());
        assert_eq!(a, b);
        let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["phi.svg", "sqrt2.svg", "tuple.svg"]);
        let tuple = &a[2].1;
        assert!(tuple.starts_with("<svg") && tuple.ends_with("</svg>\n"));
        assert_eq!(tuple.matches("stroke-dasharray").count(), 3);
        assert_eq!(tuple.matches("stroke-width=\"1.5\"").count(), 2);
    }

    #[test]
    fn coordinates_stay_in_frame() {
        let c = ctx();
        for opts in [PlotOptions::default(), PlotOptions { log_x: false, log_y: false, ..PlotOptions::default() }] {
            let svg = render_tuple(&c, opts);
            let path = svg.lines().find(|l| l.contains("stroke-width=\"1.5\"")).unwrap();
            let d = &path[path.find("d=\"").unwrap() + 3..];
            let d = &d[..d.find('"').unwrap()];
            for tok in d.split(' ').filter_map(|s| s.parse::<f64>().ok()) {
                assert!((MARGIN - 1e-6..=800.0).contains(&tok), "{tok}");
            }
        }
    }
}
