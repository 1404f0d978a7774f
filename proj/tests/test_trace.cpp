#include "catch_amalgamated.hpp"

#include <sstream>

#include "vheap/trace.hpp"

using vheap::run_trace;

namespace {
struct Run {
  int code;
  std::string out;
  std::string err;
};

Run replay(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out, err;
  int code = run_trace(in, out, err);
  return {code, out.str(), err.str()};
}
} // namespace

TEST_CASE("trace replay", "[trace]") {
  SECTION("deletemin prints id and key") {
    auto r = replay("new h\ninsert h a 5\ninsert h b 3\ndeletemin h\n");
    CHECK(r.code == 0);
    CHECK(r.out == "b 3\n");
  }
  SECTION("comments, findmin and decrease") {
    auto r = replay("# header\nnew h   # heap\ninsert h a 5\ninsert h b 7\n\ndecrease h b 1\nfindmin h\n"
                    "deletemin h\ndeletemin h\nfindmin h\n");
    CHECK(r.code == 0);
    CHECK(r.out == "b 1\nb 1\na 5\nnone\n");
  }
  SECTION("check on an empty heap") {
    auto r = replay("new h\ncheck h\n");
    CHECK(r.code == 0);
    CHECK(r.out == "{\"violations\":[],\"nodes\":0,\"max_rank\":0}\n");
  }
  SECTION("meld moves ids") {
    auto r = replay("new a\nnew b\ninsert a x 4\ninsert b y 9\nmeld a b\ndecrease a y 1\n"
                    "deletemin a\ncheck a\n");
    CHECK(r.code == 0);
    CHECK(r.out == "y 1\n{\"violations\":[],\"nodes\":1,\"max_rank\":0}\n");
  }
  SECTION("decrease on a retired id") {
    auto r = replay("new h\ninsert h a 5\ndeletemin h\ndecrease h a 1\n");
    CHECK(r.code == 1);
    CHECK(r.err == "line 4: dead id 'a'\n");
  }
  SECTION("errors name their line") {
    CHECK(replay("new h\nfrobnicate h\n").err == "line 2: unknown op 'frobnicate'\n");
    CHECK(replay("insert h a 1\n").err == "line 1: unknown heap 'h'\n");
    CHECK(replay("new h\ninsert h a 1\ninsert h a 2\n").err == "line 3: id 'a' already used\n");
    CHECK(replay("new h\ninsert h a 1\ndecrease h a 4\n").err == "line 3: key increase not supported\n");
    CHECK(replay("new h\ninsert h a x\n").err == "line 2: bad key 'x'\n");
    CHECK(replay("new h\ndeletemin h\n").err == "line 2: empty\n");
    CHECK(replay("new a\nnew b\nmeld a b\ninsert b x 1\n").err == "line 4: unknown heap 'b'\n");
    CHECK(replay("new a\nnew b\ninsert b x 1\ndecrease a x 0\n").err == "line 4: id 'x' is not in heap 'a'\n");
    CHECK(replay("new h extra\n").code == 1);
  }
}
