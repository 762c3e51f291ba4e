use adaptive_inpaint::{
    decode_image, encode_mask, encode_png, generate_mask, inpaint, psnr, ssim, Image,
    InpaintConfig, LineMaskSpec, ScratchMask,
};
use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use inpaint_service::{router, ServiceConfig};
use tower::ServiceExt;

const BOUNDARY: &str = "XtestBoundaryX";

enum Part<'a> {
    File(&'a str, &'a [u8]),
    Text(&'a str, &'a str),
}

fn multipart(parts: &[Part]) -> Vec<u8> {
    let mut body = Vec::new();
    for part in parts {
        body.extend_from_slice(format!("--{BOUNDARY}\r\n").as_bytes());
        match part {
            Part::File(name, bytes) => {
                body.extend_from_slice(
                    format!(
                        "Content-Disposition: form-data; name=\"{name}\"; filename=\"{name}.png\"\r\nContent-Type: image/png\r\n\r\n"
                    )
                    .as_bytes(),
                );
                body.extend_from_slice(bytes);
            }
            Part::Text(name, value) => {
                body.extend_from_slice(
                    format!("Content-Disposition: form-data; name=\"{name}\"\r\n\r\n{value}")
                        .as_bytes(),
                );
            }
        }
        body.extend_from_slice(b"\r\n");
    }
    body.extend_from_slice(format!("--{BOUNDARY}--\r\n").as_bytes());
    body
}

async fn post(
    cfg: &ServiceConfig,
    uri: &str,
    parts: &[Part<'_>],
) -> (StatusCode, axum::http::HeaderMap, Vec<u8>) {
    let req = Request::post(uri)
        .header(
            "content-type",
            format!("multipart/form-data; boundary={BOUNDARY}"),
        )
        .body(Body::from(multipart(parts)))
        .unwrap();
    let resp = router(cfg).oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let body = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, headers, body)
}

fn json(body: &[u8]) -> serde_json::Value {
    serde_json::from_slice(body).unwrap()
}

fn photo(w: usize, h: usize, channels: usize) -> Image {
    let bytes: Vec<u8> = (0..w * h * channels)
        .map(|i| {
            let (r, c, ch) = (i / channels / w, i / channels % w, i % channels);
            ((r * 7 + c * 13 + ch * 29) % 97 * 2) as u8
        })
        .collect();
    Image::from_bytes(w, h, channels, &bytes).unwrap()
}

#[tokio::test]
async fn inpaint_matches_library_bit_for_bit() {
    let cfg = ServiceConfig::default();
    let img = photo(40, 30, 3);
    let mask = generate_mask(40, 30, &LineMaskSpec::with_seed(5)).unwrap();
    let (status, headers, body) = post(
        &cfg,
        "/api/inpaint",
        &[
            Part::File("image", &encode_png(&img).unwrap()),
            Part::File("mask", &encode_mask(&mask).unwrap()),
        ],
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(headers["content-type"], "image/png");
    let secs: f64 = headers["x-elapsed-seconds"]
        .to_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!(secs >= 0.0);
    let expected = encode_png(&inpaint(&img, &mask, &InpaintConfig::default()).unwrap()).unwrap();
    assert_eq!(body, expected);
}

#[tokio::test]
async fn options_are_applied() {
    let cfg = ServiceConfig::default();
    let img = photo(32, 32, 1);
    let mask = generate_mask(32, 32, &LineMaskSpec::with_seed(2)).unwrap();
    let (status, _, body) = post(
        &cfg,
        "/api/inpaint",
        &[
            Part::File("image", &encode_png(&img).unwrap()),
            Part::File("mask", &encode_mask(&mask).unwrap()),
            Part::Text("k_total", "6"),
            Part::Text("edge_threshold", "0.3"),
            Part::Text("max_passes", "2"),
        ],
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let custom = InpaintConfig {
        k_total: 6,
        edge_threshold: 0.3,
        max_passes: 2,
    };
    assert_eq!(
        body,
        encode_png(&inpaint(&img, &mask, &custom).unwrap()).unwrap()
    );

    let (status, _, body) = post(
        &cfg,
        "/api/inpaint",
        &[
            Part::File("image", &encode_png(&img).unwrap()),
            Part::File("mask", &encode_mask(&mask).unwrap()),
            Part::Text("k_total", "3"),
        ],
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(json(&body)["error"].as_str().unwrap().contains("k_total"));
}

#[tokio::test]
async fn empty_mask_returns_input_pixels() {
    let img = photo(24, 20, 3);
    let (status, _, body) = post(
        &ServiceConfig::default(),
        "/api/inpaint",
        &[
            Part::File("image", &encode_png(&img).unwrap()),
            Part::File(
                "mask",
                &encode_mask(&ScratchMask::empty(24, 20).unwrap()).unwrap(),
            ),
        ],
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let out: Image = decode_image(&body).unwrap();
    assert_eq!(out.to_bytes(), img.to_bytes());
}

#[tokio::test]
async fn bad_inputs_are_400_with_json() {
    let cfg = ServiceConfig::default();
    let img = encode_png(&photo(24, 20, 1)).unwrap();
    let small = encode_mask(&ScratchMask::empty(24, 19).unwrap()).unwrap();
    let cases: Vec<Vec<Part>> = vec![
        vec![Part::File("image", &img), Part::File("mask", &small)],
        vec![Part::File("image", &img)],
        vec![
            Part::File("image", b"not a png"),
            Part::File("mask", &small),
        ],
        vec![
            Part::File("image", &img),
            Part::File("mask", &img),
            Part::Text("max_passes", "x"),
        ],
    ];
    for parts in cases {
        let (status, _, body) = post(&cfg, "/api/inpaint", &parts).await;
        assert_eq!(status, StatusCode::BAD_REQUEST);
        assert!(json(&body)["error"].is_string());
    }

    let req = Request::post("/api/inpaint")
        .body(Body::from("plain"))
        .unwrap();
    let resp = router(&cfg).oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn oversized_body_is_413() {
    let cfg = ServiceConfig {
        body_limit: 1024,
        ..ServiceConfig::default()
    };
    let big = vec![0u8; 4096];
    let (status, _, _) = post(
        &cfg,
        "/api/inpaint",
        &[Part::File("image", &big), Part::File("mask", &big)],
    )
    .await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
}

#[tokio::test]
async fn metrics_endpoint() {
    let cfg = ServiceConfig::default();
    let a = photo(32, 24, 3);
    let b = Image::from_fn(32, 24, 3, |r, c, ch| {
        (a.get(r, c, ch) + 8.0 / 255.0).min(1.0)
    })
    .unwrap();
    let (ea, eb) = (encode_png(&a).unwrap(), encode_png(&b).unwrap());

    let (status, _, body) = post(
        &cfg,
        "/api/metrics",
        &[Part::File("reference", &ea), Part::File("test", &ea)],
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        json(&body),
        serde_json::json!({ "psnr_db": "inf", "ssim": 1.0 })
    );

    let (status, _, body) = post(
        &cfg,
        "/api/metrics",
        &[Part::File("reference", &ea), Part::File("test", &eb)],
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let (da, db): (Image, Image) = (decode_image(&ea).unwrap(), decode_image(&eb).unwrap());
    let v = json(&body);
    assert_eq!(v["psnr_db"].as_f64().unwrap(), psnr(&da, &db).unwrap());
    assert_eq!(v["ssim"].as_f64().unwrap(), ssim(&da, &db).unwrap());

    let gray = encode_png(&a.luminance()).unwrap();
    let (status, _, body) = post(
        &cfg,
        "/api/metrics",
        &[Part::File("reference", &gray), Part::File("test", &eb)],
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    assert!(v["psnr_db"].as_f64().unwrap().is_finite() && v["ssim"].as_f64().unwrap().is_finite());

    let other = encode_png(&photo(31, 24, 3)).unwrap();
    let (status, _, body) = post(
        &cfg,
        "/api/metrics",
        &[Part::File("reference", &ea), Part::File("test", &other)],
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(json(&body)["error"].is_string());
}

#[tokio::test]
async fn health() {
    let app = router(&ServiceConfig::default());
    let resp = app
        .clone()
        .oneshot(Request::get("/health").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let v = json(&resp.into_body().collect().await.unwrap().to_bytes());
    assert_eq!(v["status"], "ok");
    assert!(v["version"].is_string());
    let resp = app
        .oneshot(Request::post("/health").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::METHOD_NOT_ALLOWED);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn health_answers_while_engine_busy() {
    let cfg = ServiceConfig {
        workers: 1,
        ..ServiceConfig::default()
    };
    let app = router(&cfg);
    let img = encode_png(&photo(512, 512, 3)).unwrap();
    let mask = encode_mask(&ScratchMask::from_fn(512, 512, |r, _| r % 3 != 0).unwrap()).unwrap();
    let busy = {
        let app = app.clone();
        let body = multipart(&[Part::File("image", &img), Part::File("mask", &mask)]);
        tokio::spawn(async move {
            let req = Request::post("/api/inpaint")
                .header(
                    "content-type",
                    format!("multipart/form-data; boundary={BOUNDARY}"),
                )
                .body(Body::from(body))
                .unwrap();
            app.oneshot(req).await.unwrap().status()
        })
    };
    let resp = app
        .oneshot(Request::get("/health").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    assert_eq!(busy.await.unwrap(), StatusCode::OK);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_identical_requests_agree() {
    let cfg = ServiceConfig {
        workers: 2,
        ..ServiceConfig::default()
    };
    let img = encode_png(&photo(48, 48, 3)).unwrap();
    let mask = encode_mask(&generate_mask(48, 48, &LineMaskSpec::with_seed(8)).unwrap()).unwrap();
    let mut handles = Vec::new();
    for _ in 0..6 {
        let (cfg, img, mask) = (cfg.clone(), img.clone(), mask.clone());
        handles.push(tokio::spawn(async move {
            post(
                &cfg,
                "/api/inpaint",
                &[Part::File("image", &img), Part::File("mask", &mask)],
            )
            .await
            .2
        }));
    }
    let mut bodies = Vec::new();
    for h in handles {
        bodies.push(h.await.unwrap());
    }
    assert!(bodies.windows(2).all(|w| w[0] == w[1]));
}

#[tokio::test]
async fn static_directory_is_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html>ui</html>").unwrap();
    let cfg = ServiceConfig {
        static_dir: Some(dir.path().to_path_buf()),
        ..ServiceConfig::default()
    };
    let resp = router(&cfg)
        .oneshot(Request::get("/").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let body = resp.into_body().collect().await.unwrap().to_bytes();
    assert_eq!(&body[..], b"<html>ui</html>");
}
