#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <thread>

#include "bqc/circuitgen.hpp"
#include "bqc/netlink.hpp"

using namespace bqc;
using namespace bqc::netlink;

namespace {

struct SessionResult {
    ServerReport server;
    ClientReport client;
};

SessionResult loopback_session(const CircuitIR& program, const ErrorModel& model,
                               uint64_t client_seed, uint64_t server_seed, int rtt_ms = 0,
                               bool reveal_s = false) {
    ServerOptions sopt;
    sopt.seed = server_seed;
    sopt.rtt_ms = rtt_ms;
    Server server(model, sopt);
    const int port = server.start();

    SessionResult result;
    std::thread server_thread([&] { result.server = server.serve_one(); });

    ClientOptions copt;
    copt.port = port;
    copt.seed = client_seed;
    copt.reveal_s = reveal_s;
    result.client = run_client(program, model, copt);
    server_thread.join();
    return result;
}

}  // namespace

TEST_CASE("single blind gate at eta = 1: exactly one photon round") {
    CircuitIR program;
    program.n_qubits = 1;
    program.c = 3;
    program.family = "single";
    program.gates.push_back(CircuitGate::b_theta(0, 5));

    ErrorModel model;  // eta = 1
    // guarantee a single iteration by scanning seeds for m = 0 first up
    for (uint64_t seed = 1; seed < 50; ++seed) {
        RngStream probe(seed, "netlink-server");
        if (probe.split("gate", 0).bit() != 0) continue;
        SessionResult r = loopback_session(program, model, 7, seed);
        REQUIRE(r.client.ok);
        REQUIRE(r.server.ok);
        int photons = 0, clicks = 0, teleports = 0;
        for (const auto& e : r.client.transcript.entries) {
            WireMessage m = WireMessage::parse(e.line);
            if (m.kind == "PHOTON") ++photons;
            if (m.kind == "CLICK") ++clicks;
            if (m.kind == "TELEPORT_RESULT") ++teleports;
        }
        CHECK(photons == 1);
        CHECK(clicks == 1);
        CHECK(teleports == 1);
        return;
    }
    FAIL("no seed with immediate teleport success found");
}

TEST_CASE("empty program completes with an immediate DONE handshake") {
    CircuitIR program;
    program.n_qubits = 1;
    program.c = 3;
    program.family = "empty";
    ErrorModel model;
    SessionResult r = loopback_session(program, model, 3, 4);
    REQUIRE(r.client.ok);
    REQUIRE(r.server.ok);
    CHECK(r.client.gates.empty());
    // HELLO, LOCAL_OPS, DONE out; DONE in
    CHECK(r.client.transcript.entries.size() == 4);
}

TEST_CASE("dual-transport equivalence over random programs") {
    RngStream rng(11, "programs");
    for (int rep = 0; rep < 6; ++rep) {
        CircuitIR program = circuitgen::build_bricklayer(2 + int(rng.below(2)), 1 + int(rng.below(2)),
                                                         1.0, 3, rng.u64());
        ErrorModel model;
        model.eta = 0.7;
        const uint64_t cs = rng.u64(), ss = rng.u64();
        SessionResult wire = loopback_session(program, model, cs, ss);
        REQUIRE(wire.client.ok);
        LocalRunResult local = run_program_local(program, model, cs, ss);
        REQUIRE(local.gates.size() == wire.client.gates.size());
        for (size_t i = 0; i < local.gates.size(); ++i) {
            CHECK(local.gates[i].s == wire.client.gates[i].s);
            CHECK(local.gates[i].iterations == wire.client.gates[i].iterations);
            CHECK(local.gates[i].photons_sent == wire.client.gates[i].photons_sent);
            CHECK(local.gates[i].photons_measured == wire.client.gates[i].photons_measured);
        }
        CHECK(local.state_digest == wire.client.state_digest);
    }
}

TEST_CASE("message pairing invariants hold on transcripts") {
    CircuitIR program = circuitgen::build_bricklayer(2, 1, 1.0, 3, 5);
    ErrorModel model;
    model.eta = 0.5;
    SessionResult r = loopback_session(program, model, 21, 22);
    REQUIRE(r.client.ok);
    std::string why;
    CHECK(validate_pairing(r.client.transcript, &why));
    CHECK(validate_pairing(r.server.transcript, &why));
}

TEST_CASE("photon counts track the loss-tolerant overhead") {
    CircuitIR program = circuitgen::build_bricklayer(2, 3, 1.0, 3, 9);  // 25 blind gates
    ErrorModel model;
    model.eta = 0.5;
    long photons = 0;
    long gates = 0;
    for (uint64_t seed = 0; seed < 12; ++seed) {
        LocalRunResult local = run_program_local(program, model, seed * 2 + 1, seed * 2 + 2);
        for (const auto& g : local.gates) photons += g.photons_sent;
        gates += long(local.gates.size());
    }
    const double per_gate = double(photons) / double(gates);
    const double expect = 1.75 / 0.5;
    CHECK(std::abs(per_gate - expect) / expect < 0.15);
}

TEST_CASE("blindness audit: no angles on the wire, s redacted") {
    CircuitIR program = circuitgen::build_bricklayer(2, 1, 1.0, 3, 31);
    ErrorModel model;
    SessionResult r = loopback_session(program, model, 41, 42);
    REQUIRE(r.client.ok);
    CHECK(r.client.audit_ok);
    // the secret angle indices must not appear in any LOCAL_OPS payload
    for (const auto& e : r.client.transcript.entries) {
        WireMessage m = WireMessage::parse(e.line);
        if (m.kind == "LOCAL_OPS")
            for (const auto& g : m.payload.at("program").at("gates"))
                if (g.at("kind") == "b_theta") CHECK_FALSE(g.contains("p"));
    }
}

TEST_CASE("latency accounting with injected RTT") {
    CircuitIR program;
    program.n_qubits = 1;
    program.c = 2;
    program.family = "latency";
    for (int i = 0; i < 3; ++i) program.gates.push_back(CircuitGate::b_theta(0, 1));
    ErrorModel model;  // eta = 1: photons never retry, iterations still vary
    const int rtt_ms = 20;
    SessionResult r = loopback_session(program, model, 51, 52, rtt_ms);
    REQUIRE(r.client.ok);
    REQUIRE(r.client.per_gate_seconds.size() == r.client.gates.size());
    for (size_t i = 0; i < r.client.gates.size(); ++i) {
        const double floor_s = double(rtt_ms) / 1000.0 * double(r.client.gates[i].iterations);
        CHECK(r.client.per_gate_seconds[i] >= floor_s * 0.95);
    }
}

TEST_CASE("server rejects out-of-order protocol") {
    // a client that skips HELLO must get an ERROR and a failed session
    ErrorModel model;
    ServerOptions sopt;
    sopt.seed = 3;
    Server server(model, sopt);
    const int port = server.start();
    std::thread server_thread([&] {
        ServerReport rep = server.serve_one();
        CHECK_FALSE(rep.ok);
    });
    CircuitIR program;
    program.n_qubits = 1;
    program.c = 3;
    program.gates.push_back(CircuitGate::b_theta(0, 1));
    // speak DONE first by abusing run_client before HELLO: simplest is a raw
    // socket exchange; reuse run_client against a closed expectation instead
    ClientOptions copt;
    copt.port = port;
    copt.seed = 5;
    // craft the violation: connect and send a DONE envelope manually
    {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(uint16_t(port));
        inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
        REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
        const std::string line =
            R"({"seq":1,"session":9,"kind":"DONE","payload":{"transcript_hash":0}})"
            "\n";
        REQUIRE(::send(fd, line.data(), line.size(), 0) > 0);
        char buf[512];
        const ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
        CHECK(n > 0);
        CHECK(std::string(buf, size_t(n)).find("ERROR") != std::string::npos);
        ::close(fd);
    }
    server_thread.join();
}
