//! SVG rendering of a state space, laid out by breadth-first depth.
//!
//! Column = distance from the initial configuration, row = discovery order
//! within the layer. The initial state is outlined blue, stuck terminals
//! red, clean terminals green. Node and edge tooltips carry the full
//! configuration and action texts.

use imds::lts::Lts;
use imds::model::SystemSpec;

const DX: i64 = 130;
const DY: i64 = 46;
const R: i64 = 11;
const MARGIN: i64 = 40;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(lts: &Lts, spec: &SystemSpec) -> String {
    let n = lts.state_count();
    // Breadth-first layering from state 0; state numbering is already in
    // discovery order, so a queue-free pass suffices.
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut queue = std::collections::VecDeque::from([0u32]);
    let mut max_depth = 0;
    while let Some(s) = queue.pop_front() {
        for t in lts.successors(s) {
            if depth[t.dst as usize] == usize::MAX {
                depth[t.dst as usize] = depth[s as usize] + 1;
                max_depth = max_depth.max(depth[t.dst as usize]);
                queue.push_back(t.dst);
            }
        }
    }
    let mut layers: Vec<Vec<u32>> = vec![Vec::new(); max_depth + 1];
    let mut row = vec![0i64; n];
    for i in 0..n {
        if depth[i] != usize::MAX {
            row[i] = layers[depth[i]].len() as i64;
            layers[depth[i]].push(i as u32);
        }
    }
    let tallest = layers.iter().map(|l| l.len()).max().unwrap_or(1) as i64;
    let width = 2 * MARGIN + DX * max_depth as i64 + 2 * R;
    let height = 2 * MARGIN + DY * (tallest - 1).max(0) + 2 * R;
    let pos = |i: u32| -> (i64, i64) {
        let d = depth[i as usize] as i64;
        // Center each layer vertically.
        let count = layers[depth[i as usize]].len() as i64;
        let offset = (tallest - count) * DY / 2;
        (
            MARGIN + R + d * DX,
            MARGIN + R + offset + row[i as usize] * DY,
        )
    };

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width} {height}\" \
         width=\"{width}\" height=\"{height}\">\n\
         <defs><marker id=\"arrow\" markerWidth=\"7\" markerHeight=\"7\" refX=\"6\" refY=\"2\" \
         orient=\"auto\"><path d=\"M0,0 L6,2 L0,4 z\" fill=\"#777\"/></marker></defs>\n"
    );

    for t in lts.transitions() {
        let (x1, y1) = pos(t.src);
        let (x2, y2) = pos(t.dst);
        let title = escape(&spec.action_text(t.action));
        if t.src == t.dst {
            out.push_str(&format!(
                "<path d=\"M {} {} C {} {}, {} {}, {} {}\" fill=\"none\" stroke=\"#999\" \
                 marker-end=\"url(#arrow)\"><title>{title}</title></path>\n",
                x1,
                y1 - R,
                x1 - 2 * R,
                y1 - 3 * R,
                x1 + 2 * R,
                y1 - 3 * R,
                x1 + R / 2,
                y1 - R
            ));
        } else if depth[t.dst as usize] > depth[t.src as usize] {
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{y1}\" x2=\"{}\" y2=\"{y2}\" stroke=\"#999\" \
                 stroke-opacity=\"0.7\" marker-end=\"url(#arrow)\"><title>{title}</title></line>\n",
                x1 + R,
                x2 - R - 3
            ));
        } else {
            // Backward or same-layer edge: bow it to keep it readable.
            let mx = (x1 + x2) / 2;
            let my = (y1 + y2) / 2 - DY * 3 / 4;
            out.push_str(&format!(
                "<path d=\"M {} {} Q {mx} {my}, {} {}\" fill=\"none\" stroke=\"#b8985a\" \
                 stroke-opacity=\"0.8\" marker-end=\"url(#arrow)\"><title>{title}</title></path>\n",
                x1,
                y1 - R,
                x2,
                y2 - R
            ));
        }
    }

    for i in 0..n as u32 {
        let (x, y) = pos(i);
        let (fill, stroke) = if lts.is_terminal(i) {
            if lts.any_pending(i) {
                ("#f1b6bb", "#c9444f") // stuck: total deadlock here
            } else {
                ("#bfe5c8", "#3f9d5a") // clean termination
            }
        } else if i == 0 {
            ("#cfe2ff", "#3c6fd1")
        } else {
            ("#eeeeee", "#888888")
        };
        let title = escape(&lts.state(i).text(spec));
        out.push_str(&format!(
            "<g><circle cx=\"{x}\" cy=\"{y}\" r=\"{R}\" fill=\"{fill}\" stroke=\"{stroke}\" \
             stroke-width=\"{}\"/><text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" \
             font-size=\"9\" font-family=\"sans-serif\">{i}</text><title>#{i}: {title}</title></g>\n",
            if i == 0 { 2 } else { 1 },
            y + 3
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use imds::lts::LtsLimits;
    use imds::model::SpecBuilder;

    #[test]
    fn svg_has_nodes_edges_and_classes() {
        let mut b = SpecBuilder::new();
        b.add_server("s", &["q", "done"], &["go"], "q").unwrap();
        b.add_agent("A", "s", "go").unwrap();
        b.rule("A", "s", "go", "q", "done", None).unwrap();
        let spec = b.finish().unwrap();
        let lts = Lts::build(&spec, &LtsLimits::default()).unwrap();
        let svg = render_svg(&lts, &spec);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<line").count(), 1);
        assert!(svg.contains("#bfe5c8"), "clean terminal colored");
        assert!(svg.contains("s=done"), "tooltip carries configuration");
    }

    #[test]
    fn self_loops_render_as_arcs() {
        let mut b = SpecBuilder::new();
        b.add_server("r", &["res"], &["tick"], "res").unwrap();
        b.add_agent("L", "r", "tick").unwrap();
        b.rule("L", "r", "tick", "res", "res", Some(("r", "tick")))
            .unwrap();
        let spec = b.finish().unwrap();
        let lts = Lts::build(&spec, &LtsLimits::default()).unwrap();
        let svg = render_svg(&lts, &spec);
        assert!(svg.contains("<path"));
    }
}
