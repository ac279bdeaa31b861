use std::fmt::Write;

use quick_xml::escape::escape;

use super::{MpdModel, DASH_NAMESPACE, SRD_SCHEME};

/// ISO 8601 duration in seconds, printed with the shortest exact decimal.
pub(crate) fn iso_duration(seconds: f64) -> String {
    format!("PT{seconds}S")
}

/// Renders the manifest as MPD XML.
///
/// Output depends only on the model: attributes are written in a fixed order
/// and adaptation sets sorted by `spatial_set_id`.
pub fn serialize_mpd(m: &MpdModel) -> String {
    let mut sets: Vec<_> = m.adaptation_sets.iter().collect();
    sets.sort_by_key(|a| a.srd.spatial_set_id);
    let seg_ms = (m.segment_duration_s * 1000.0).round().max(1.0) as u64;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<MPD xmlns="{DASH_NAMESPACE}" profiles="urn:mpeg:dash:profile:isoff-live:2011,{SRD_SCHEME}" type="static" mediaPresentationDuration="{}" maxSegmentDuration="{}" minBufferTime="{}">"#,
        iso_duration(m.media_duration_s),
        iso_duration(m.segment_duration_s),
        iso_duration(m.segment_duration_s),
    );
    let _ = writeln!(
        out,
        "  <!-- SRD spatial_set_id is the hexaface segment: 0=TOP 1=BOTTOM 2=M0 3=M1 4=M2 5=M3 -->"
    );
    let _ = writeln!(out, r#"  <Period id="0" start="PT0S">"#);
    for set in sets {
        let srd = &set.srd;
        let _ = writeln!(
            out,
            r#"    <AdaptationSet id="{}" contentType="video" mimeType="video/mp4" segmentAlignment="true" bitstreamSwitching="true">"#,
            srd.spatial_set_id
        );
        let _ = writeln!(
            out,
            r#"      <SupplementalProperty schemeIdUri="{SRD_SCHEME}" value="{}"/>"#,
            srd.value()
        );
        for r in &set.representations {
            let _ = writeln!(
                out,
                r#"      <Representation id="tile{}_rep{}" qualityRanking="{}" bandwidth="{}" width="{}" height="{}">"#,
                srd.spatial_set_id, r.rep_id, r.rep_id, r.bandwidth_bps, r.width, r.height
            );
            let _ = writeln!(
                out,
                r#"        <SegmentTemplate media="{}" timescale="1000" duration="{seg_ms}" startNumber="1"/>"#,
                escape(r.media_template.as_str())
            );
            let _ = writeln!(out, "      </Representation>");
        }
        let _ = writeln!(out, "    </AdaptationSet>");
    }
    let _ = writeln!(out, "  </Period>");
    let _ = writeln!(out, "</MPD>");
    out
}
