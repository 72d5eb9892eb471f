#include <gtest/gtest.h>

#include <set>
#include <thread>

#include "png_decode.hpp"
#include "srg/server/http_api.hpp"
#include "srg/srg.hpp"

using namespace srg;
using namespace srg::server;
using nlohmann::json;

namespace {

std::vector<Label> vec(const LabelMap& m) { return {m.labels().begin(), m.labels().end()}; }

class ServerTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        server_ = new httplib::Server;
        store_ = new SessionStore;
        install_routes(*server_, *store_);
        port_ = server_->bind_to_any_port("127.0.0.1");
        thread_ = new std::thread([] { server_->listen_after_bind(); });
        server_->wait_until_ready();
    }
    static void TearDownTestSuite() {
        server_->stop();
        thread_->join();
        delete thread_;
        delete server_;
        delete store_;
    }

    static httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

    static std::string phantom_pgm() {
        const Bytes b = encode_pgm(generate_phantom(PhantomSpec{}).grid);
        return {b.begin(), b.end()};
    }

    static std::string upload(const std::string& body = phantom_pgm()) {
        auto res = client().Post("/api/sessions", body, "image/x-portable-graymap");
        EXPECT_TRUE(res);
        EXPECT_EQ(res->status, 201);
        return json::parse(res->body).at("id").get<std::string>();
    }

    static httplib::Result grow(const std::string& id, const json& body) {
        return client().Post("/api/sessions/" + id + "/runs", body.dump(), "application/json");
    }

    static std::vector<Label> decode_mask(const json& mask) {
        std::vector<LabelRun> runs;
        for (const auto& r : mask.at("runs")) runs.push_back(LabelRun{r[0].get<Label>(), r[1].get<std::size_t>()});
        return decode_rle(runs, mask.at("width").get<std::size_t>() * mask.at("height").get<std::size_t>());
    }

    static inline httplib::Server* server_ = nullptr;
    static inline SessionStore* store_ = nullptr;
    static inline std::thread* thread_ = nullptr;
    static inline int port_ = 0;
};

}  // namespace

TEST_F(ServerTest, UploadReturnsIdAndDims) {
    auto res = client().Post("/api/sessions", phantom_pgm(), "image/x-portable-graymap");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 201);
    const json body = json::parse(res->body);
    EXPECT_EQ(body.at("id").get<std::string>().size(), 32U);
    EXPECT_EQ(body.at("width"), 64);
    EXPECT_EQ(body.at("height"), 64);
    EXPECT_EQ(body.at("min"), 20);
    EXPECT_EQ(body.at("max"), 200);
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST_F(ServerTest, DistinctIdsPerUpload) {
    std::set<std::string> ids;
    for (int i = 0; i < 5; ++i) ids.insert(upload());
    EXPECT_EQ(ids.size(), 5U);
}

TEST_F(ServerTest, TruncatedUploadCreatesNoSession) {
    const std::size_t before = store_->size();
    std::string body = phantom_pgm();
    body.resize(body.size() - 10);
    auto res = client().Post("/api/sessions", body, "image/x-portable-graymap");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    const json err = json::parse(res->body);
    EXPECT_NE(err.at("error").get<std::string>().find("truncated"), std::string::npos);
    EXPECT_EQ(store_->size(), before);

    res = client().Post("/api/sessions", "not an image", "text/plain");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    EXPECT_EQ(store_->size(), before);
}

TEST_F(ServerTest, GrowMatchesLibraryAndRepeats) {
    const std::string id = upload();
    const json req = {{"engine", "stack"}, {"criterion", "gn:k=0.25"}, {"seeds", {{32, 20}}}};
    auto first = grow(id, req);
    ASSERT_TRUE(first);
    ASSERT_EQ(first->status, 201) << first->body;
    const json a = json::parse(first->body);
    EXPECT_EQ(a.at("run"), 1);
    EXPECT_EQ(a.at("report").at("sites_accepted"), 377);

    const Phantom ph = generate_phantom(PhantomSpec{});
    GrowRequest lib;
    lib.seeds = {{32, 20, 0}};
    lib.criterion = CriterionConfig::gradient_gn(0.25);
    const GrowResult expected = execute_grow(ph.grid, nullptr, lib);
    EXPECT_EQ(decode_mask(a.at("mask")), vec(expected.labels));
    EXPECT_EQ(a.at("report"), grow_report_json(expected.report, expected.labels));

    auto second = grow(id, req);
    ASSERT_TRUE(second);
    const json b = json::parse(second->body);
    EXPECT_EQ(b.at("run"), 2);
    EXPECT_EQ(b.at("mask"), a.at("mask"));
}

TEST_F(ServerTest, ClassicRunMatchesLibrary) {
    const std::string id = upload();
    auto res = grow(id, {{"engine", "classic"}, {"seeds", {{32, 16}, {32, 48}, {0, 0}}}});
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 201) << res->body;
    const GrowResult lib = grow_classic(generate_phantom(PhantomSpec{}).grid, SeedSet{{32, 16, 0}, {32, 48, 0}, {0, 0, 0}});
    EXPECT_EQ(decode_mask(json::parse(res->body).at("mask")), vec(lib.labels));
}

TEST_F(ServerTest, BadRequestsNameTheField) {
    const std::string id = upload();
    auto field_of = [&](const json& body) {
        auto res = grow(id, body);
        EXPECT_TRUE(res);
        EXPECT_EQ(res->status, 400) << body.dump();
        return json::parse(res->body).at("field");
    };
    EXPECT_EQ(field_of({{"seeds", {{-1, 0}}}}), "seeds[0]");
    EXPECT_EQ(field_of({{"seeds", {{1, 1}, {64, 0}}}}), "seeds[1]");
    EXPECT_EQ(field_of({{"seeds", {{1, 1}, {2}}}}), "seeds[1]");
    EXPECT_EQ(field_of({{"seeds", json::array()}}), "seeds");
    EXPECT_EQ(field_of(json::object()), "seeds");
    EXPECT_EQ(field_of({{"seeds", {{1, 1}}}, {"criterion", "gn:k=-1"}}), "criterion");
    EXPECT_EQ(field_of({{"seeds", {{1, 1}}}, {"engine", "turbo"}}), "engine");
    EXPECT_EQ(field_of({{"seeds", {{1, 1}}}, {"neighborhood", 4}}), "neighborhood");

    auto res = client().Post("/api/sessions/" + id + "/runs", "{not json", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    EXPECT_EQ(json::parse(res->body).at("field"), "body");

    // Rejected requests leave no history entry.
    EXPECT_TRUE(store_->history(id).empty());
}

TEST_F(ServerTest, UnknownSessionOrRunIs404) {
    const std::string id = upload();
    auto res = grow("0123456789abcdef0123456789abcdef", {{"seeds", {{1, 1}}}});
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    EXPECT_EQ(client().Get("/api/sessions/nope/history")->status, 404);
    EXPECT_EQ(client().Get("/api/sessions/nope/gradient")->status, 404);
    EXPECT_EQ(client().Get("/api/sessions/" + id + "/runs/1/overlay")->status, 404);
    ASSERT_EQ(grow(id, {{"seeds", {{1, 1}}}})->status, 201);
    EXPECT_EQ(client().Get("/api/sessions/" + id + "/runs/1/overlay")->status, 200);
    EXPECT_EQ(client().Get("/api/sessions/" + id + "/runs/2/overlay")->status, 404);
    EXPECT_EQ(client().Get("/api/sessions/" + id + "/runs/0/overlay")->status, 404);
    EXPECT_EQ(client().Get("/api/sessions/" + id + "/runs/x/overlay")->status, 404);
}

TEST_F(ServerTest, OverlayPngMatchesRenderer) {
    const std::string id = upload();
    auto run = grow(id, {{"criterion", "int:t=90"}, {"seeds", {{32, 16}}}});
    ASSERT_EQ(run->status, 201);
    auto res = client().Get("/api/sessions/" + id + "/runs/1/overlay");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200);
    EXPECT_EQ(res->get_header_value("Content-Type"), "image/png");
    const RunRecord rec = store_->history(id).front();
    const Bytes expected = render_overlay_png(generate_phantom(PhantomSpec{}).grid, rec.labels);
    EXPECT_EQ(res->body, std::string(expected.begin(), expected.end()));
    const auto img = testpng::decode(res->body);
    EXPECT_EQ(img.width, 64U);
    EXPECT_EQ(img.height, 64U);
    EXPECT_EQ(img.channels, 3);
    // The seed pixel is white (intensity max) blended half and half with the first palette color.
    const std::size_t p = 3 * (16 * 64 + 32);
    EXPECT_EQ(img.pixels[p], (255 + palette_color(1).r) / 2);
    EXPECT_EQ(img.pixels[p + 1], (255 + palette_color(1).g) / 2);
    EXPECT_EQ(img.pixels[p + 2], (255 + palette_color(1).b) / 2);
    // Background stays gray.
    EXPECT_EQ(img.pixels[0], 0);
    EXPECT_EQ(img.pixels[1], 0);
}

TEST_F(ServerTest, GradientPreviewReportsExtrema) {
    const std::string id = upload();
    auto res = client().Get("/api/sessions/" + id + "/gradient");
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200);
    const GradientField field = compute_gradient(generate_phantom(PhantomSpec{}).grid);
    EXPECT_EQ(res->get_header_value("X-Gmax"), format_number(field.gmax()));
    EXPECT_EQ(res->get_header_value("X-Gmin"), format_number(field.gmin()));
    const auto img = testpng::decode(res->body);
    EXPECT_EQ(img.channels, 1);
    EXPECT_EQ(*std::max_element(img.pixels.begin(), img.pixels.end()), 255);
    EXPECT_EQ(*std::min_element(img.pixels.begin(), img.pixels.end()), 0);
}

TEST_F(ServerTest, HistoryKeepsOrderAndSessionsAreIsolated) {
    const std::string a = upload();
    const std::string b = upload();
    ASSERT_EQ(grow(a, {{"criterion", "gn:k=0.25"}, {"seeds", {{32, 16}}}})->status, 201);
    ASSERT_EQ(grow(a, {{"engine", "classic"}, {"seeds", {{32, 16}, {0, 0}}}})->status, 201);
    ASSERT_EQ(grow(b, {{"seeds", {{5, 5}}}})->status, 201);

    const json ha = json::parse(client().Get("/api/sessions/" + a + "/history")->body);
    ASSERT_EQ(ha.size(), 2U);
    EXPECT_EQ(ha[0].at("run"), 1);
    EXPECT_EQ(ha[0].at("report").at("engine"), "stack");
    EXPECT_EQ(ha[1].at("run"), 2);
    EXPECT_EQ(ha[1].at("report").at("engine"), "classic");
    const json hb = json::parse(client().Get("/api/sessions/" + b + "/history")->body);
    ASSERT_EQ(hb.size(), 1U);
    EXPECT_EQ(hb[0].at("run"), 1);
}

TEST_F(ServerTest, ConcurrentRunsOnOneSessionAreSerialized) {
    const std::string id = upload();
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([&] {
            for (int i = 0; i < 5; ++i) EXPECT_EQ(grow(id, {{"seeds", {{32, 16}}}})->status, 201);
        });
    }
    for (auto& w : workers) w.join();
    const auto hist = store_->history(id);
    ASSERT_EQ(hist.size(), 20U);
    for (std::size_t i = 0; i < hist.size(); ++i) {
        EXPECT_EQ(hist[i].id, i + 1);
        EXPECT_EQ(vec(hist[i].labels), vec(hist[0].labels));
    }
}

TEST_F(ServerTest, PreflightAllowsCors) {
    auto res = client().Options("/api/sessions");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 204);
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST(SessionStore, GradientIsComputedLazily) {
    SessionStore store;
    const Bytes pgm = encode_pgm(generate_phantom(PhantomSpec{}).grid);
    const SessionInfo info = store.create(pgm);
    auto cached = [&] { return store.with_session(info.id, [](Session& s) { return s.gradient_cached(); }); };
    EXPECT_FALSE(cached());
    GrowRequest classic;
    classic.engine = Engine::Classic;
    classic.seeds = {{1, 1, 0}};
    (void)store.run_grow(info.id, classic);
    EXPECT_FALSE(cached());
    GrowRequest intensity;
    intensity.seeds = {{1, 1, 0}};
    intensity.criterion = CriterionConfig::simple_intensity(10);
    (void)store.run_grow(info.id, intensity);
    EXPECT_FALSE(cached());
    GrowRequest gn;
    gn.seeds = {{1, 1, 0}};
    (void)store.run_grow(info.id, gn);
    EXPECT_TRUE(cached());
    EXPECT_EQ(store.history(info.id).size(), 3U);
}

TEST(SessionStore, UnknownIdThrowsNotFound) {
    SessionStore store;
    EXPECT_THROW((void)store.history("missing"), NotFound);
    EXPECT_THROW((void)store.gradient_preview("missing"), NotFound);
}
