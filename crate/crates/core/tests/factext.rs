use signilp::factext::{
    classify_colors, detect_shape, extract, extract_detailed, letters_in_common, read_legend, ColorConfig,
    ExtractConfig, ShapeClass, TokenValue, PREDICATES,
};
use signilp::lptext::parse_program;
use signilp::scene::{
    generate_dataset, perturb, render, render_layers, DatasetConfig, GlyphFont, Legend, NamedColor, Perturbation,
    Raster, Rect, Shape, SignSpec, Variant,
};

fn spec(id: &str, shape: Shape, fill: NamedColor, border: NamedColor, legend: Legend, rot: f64) -> SignSpec {
    SignSpec {
        sign_id: id.into(),
        shape,
        fill_color: fill,
        border_color: border,
        legend,
        rotation_deg: rot,
        scale: 160,
        jitter: 6,
        seed: 17,
    }
}

fn stop(rot: f64) -> SignSpec {
    spec("p1", Shape::Octagon, NamedColor::Red, NamedColor::White, Legend::Word("STOP".into()), rot)
}

fn speed30() -> SignSpec {
    spec("n1", Shape::Circle, NamedColor::White, NamedColor::Red, Legend::Number(30), 0.0)
}

fn fact_strings(r: &Raster, id: &str) -> Vec<String> {
    extract(r, id, &ExtractConfig::default()).facts.iter().map(|a| a.to_string()).collect()
}

fn table_facts(text: &str) -> Vec<String> {
    parse_program(text).unwrap().clauses().iter().map(|c| c.head.to_string()).collect()
}

#[test]
fn p1_gives_exactly_its_five_facts() {
    let got = fact_strings(&render(&stop(0.0)).unwrap(), "p1");
    let want = table_facts(
        "color(p1,red). color(p1,white). shape(p1,octagon). has_word(p1,p1_w1). closely_match(p1_w1,stop).",
    );
    assert_eq!(got, want);
}

#[test]
fn n1_gives_exactly_its_five_facts() {
    let got = fact_strings(&render(&speed30()).unwrap(), "n1");
    let want =
        table_facts("color(n1,red). color(n1,white). shape(n1,circle). number(n1,n1_d1). digits(n1_d1,30).");
    assert_eq!(got, want);
}

#[test]
fn uniform_black_is_one_full_mask() {
    let r = Raster::new(40, 30, [0, 0, 0]);
    let m = classify_colors(&r, &ColorConfig::default());
    assert_eq!(m.len(), 1);
    assert_eq!(m[0].color, NamedColor::Black);
    assert_eq!(m[0].area_fraction, 1.0);
}

#[test]
fn blank_gray_gives_no_facts() {
    let r = Raster::new(50, 50, signilp::scene::BACKGROUND);
    assert!(fact_strings(&r, "g1").is_empty());
}

#[test]
fn one_percent_blue_sticker_is_ignored() {
    let rendered = render_layers(&stop(0.0)).unwrap();
    let total = rendered.raster.len();
    // A square of 1% of the raster area, centred low on the red fill.
    let side = ((total as f64 * 0.01).sqrt()).floor() as usize;
    let cx = rendered.raster.width / 2;
    let lb = rendered.legend_box.unwrap();
    let rect = Rect { x: cx - side / 2, y: lb.y + lb.h + 6, w: side, h: side };
    assert!(side * side <= total / 100);
    let out = perturb(&rendered, &[Perturbation::Sticker { rect, color: NamedColor::Blue }], 0);
    let masks = classify_colors(&out.raster, &ColorConfig::default());
    let names: Vec<_> = masks.iter().map(|m| m.color).collect();
    assert_eq!(names, [NamedColor::Red, NamedColor::White]);
}

#[test]
fn shapes_of_every_template_survive_rotation() {
    use NamedColor::*;
    let cases = [
        (Shape::Octagon, Red, White, Legend::Word("STOP".into())),
        (Shape::Circle, White, Red, Legend::Number(45)),
        (Shape::Triangle, White, Red, Legend::None),
        (Shape::Rectangle, Blue, White, Legend::Word("INFO".into())),
        (Shape::Diamond, Yellow, Black, Legend::None),
        (Shape::Circle, Yellow, Red, Legend::Number(60)),
    ];
    for (shape, fill, border, legend) in cases {
        for rot in [-10.0, -6.5, -3.0, 0.0, 2.0, 5.5, 10.0] {
            let r = render(&spec("x", shape, fill, border, legend.clone(), rot)).unwrap();
            let e = extract_detailed(&r, "x", &ExtractConfig::default());
            assert_eq!(e.shape, Some(ShapeClass::Known(shape)), "{shape} at {rot}");
        }
    }
}

#[test]
fn red_ring_of_speed_limit_is_a_circle() {
    let r = render(&speed30()).unwrap();
    let masks = classify_colors(&r, &ColorConfig::default());
    let red = masks.iter().find(|m| m.color == NamedColor::Red).unwrap();
    assert_eq!(detect_shape(red, 0.02).unwrap(), ShapeClass::Known(Shape::Circle));
}

#[test]
fn legends_read_back_at_several_scales() {
    let font = GlyphFont::standard();
    for scale in [120, 147, 160, 173, 220] {
        for (legend, want) in [
            (Legend::Word("STOP".into()), TokenValue::Word("STOP".into())),
            (Legend::Number(45), TokenValue::Number(45)),
            (Legend::Word("EXIT".into()), TokenValue::Word("EXIT".into())),
        ] {
            let mut s = stop(4.0);
            s.scale = scale;
            s.legend = legend;
            let tokens = read_legend(&render(&s).unwrap(), &font);
            assert_eq!(tokens.len(), 1, "scale {scale}: {tokens:?}");
            assert_eq!(tokens[0].value, want, "scale {scale}");
        }
    }
}

#[test]
fn occluded_o_is_dropped_but_stop_still_matches() {
    let rendered = render_layers(&stop(0.0)).unwrap();
    let lb = rendered.legend_box.unwrap();
    let c = rendered.cell;
    // Cover all but the top row of the third glyph with a black bar.
    let o_x = lb.x + 12 * c;
    let bar = Rect { x: o_x - 1, y: lb.y + c, w: 5 * c + 2, h: 6 * c + 1 };
    let out = perturb(&rendered, &[Perturbation::Sticker { rect: bar, color: NamedColor::Black }], 0);
    let tokens = read_legend(&out.raster, &GlyphFont::standard());
    assert_eq!(tokens.len(), 1, "{tokens:?}");
    assert_eq!(tokens[0].value, TokenValue::Word("STP".into()));
    assert!(out.occlusion > 0.2 && out.occlusion < 0.4, "{}", out.occlusion);
    assert_eq!(letters_in_common("STP", "STOP"), 3);
    let facts = fact_strings(&out.raster, "p1");
    assert!(facts.contains(&"closely_match(p1_w1,stop)".to_string()), "{facts:?}");
}

#[test]
fn schema_closure_and_determinism_over_a_dataset() {
    let cfg = ExtractConfig::default();
    for v in [Variant::Base, Variant::Rp2Graffiti, Variant::Advcam] {
        for it in generate_dataset(&DatasetConfig::new(6, 20, v, 5)).unwrap() {
            let a = extract(&it.raster, &it.spec.sign_id, &cfg);
            assert_eq!(a, extract(&it.raster, &it.spec.sign_id, &cfg));
            let mut words = Vec::new();
            for f in &a.facts {
                assert!(PREDICATES.contains(&f.pred.as_ref()), "{f}");
                assert_eq!(f.arity(), 2);
                if f.pred.as_ref() == "has_word" {
                    words.push(f.args[1].clone());
                }
            }
            for f in a.facts.iter().filter(|f| f.pred.as_ref() == "closely_match") {
                assert!(words.contains(&f.args[0]), "{f}");
            }
        }
    }
}

#[test]
fn dataset_signs_extract_as_rendered() {
    let cfg = ExtractConfig::default();
    for it in generate_dataset(&DatasetConfig::new(20, 20, Variant::Base, 11)).unwrap() {
        let e = extract_detailed(&it.raster, &it.spec.sign_id, &cfg);
        assert_eq!(e.shape, Some(ShapeClass::Known(it.spec.shape)), "{}", it.spec.sign_id);
        let want = match &it.spec.legend {
            Legend::Word(w) => vec![TokenValue::Word(w.clone())],
            Legend::Number(n) => vec![TokenValue::Number(*n as u64)],
            Legend::None => vec![],
        };
        let got: Vec<_> = e.tokens.iter().map(|t| t.value.clone()).collect();
        assert_eq!(got, want, "{}", it.spec.sign_id);
        let colors: Vec<_> = e.masks.iter().map(|m| m.color).collect();
        assert!(colors.contains(&it.spec.fill_color) && colors.contains(&it.spec.border_color));
    }
}
