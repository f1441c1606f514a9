#include "bqc/netlink.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "bqc/angleset.hpp"
#include "bqc/blindgate.hpp"
#include "bqc/statevec.hpp"

namespace bqc::netlink {

namespace {

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

int env_timeout_ms(int fallback) {
    if (const char* v = std::getenv("BQCSIM_TIMEOUT_MS")) {
        const int ms = std::atoi(v);
        if (ms > 0) return ms;
    }
    return fallback;
}

// Line-oriented socket channel with timeout, transcript capture and
// per-direction sequence validation.
class Channel {
public:
    Channel(int fd, int timeout_ms, int rtt_ms, double epoch)
        : fd_(fd), rtt_ms_(rtt_ms), epoch_(epoch) {
        timeval tv{};
        tv.tv_sec = timeout_ms / 1000;
        tv.tv_usec = (timeout_ms % 1000) * 1000;
        setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    }

    void send(WireMessage& msg) {
        msg.seq = ++out_seq_;
        if (rtt_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(rtt_ms_ / 2));
        const std::string line = msg.serialize();
        transcript.entries.push_back({true, now_seconds() - epoch_, line});
        std::string wire = line + "\n";
        size_t off = 0;
        while (off < wire.size()) {
            const ssize_t n = ::send(fd_, wire.data() + off, wire.size() - off, 0);
            if (n <= 0) throw std::runtime_error("transport failure on send");
            off += size_t(n);
        }
    }

    WireMessage recv() {
        while (true) {
            const size_t nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                const std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                if (line.empty()) continue;
                transcript.entries.push_back({false, now_seconds() - epoch_, line});
                WireMessage msg = WireMessage::parse(line);
                if (msg.seq <= in_seq_) throw std::runtime_error("sequence number not increasing");
                in_seq_ = msg.seq;
                return msg;
            }
            char chunk[4096];
            const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
            if (n <= 0) throw std::runtime_error("transport failure on recv (timeout or close)");
            buffer_.append(chunk, size_t(n));
        }
    }

    Transcript transcript;

private:
    int fd_;
    int rtt_ms_ = 0;
    double epoch_ = 0.0;
    uint64_t out_seq_ = 0;
    uint64_t in_seq_ = 0;
    std::string buffer_;
};

struct ScopedFd {
    int fd = -1;
    explicit ScopedFd(int f) : fd(f) {}
    ~ScopedFd() {
        if (fd >= 0) ::close(fd);
    }
    ScopedFd(const ScopedFd&) = delete;
    ScopedFd& operator=(const ScopedFd&) = delete;
};

}  // namespace

std::string WireMessage::serialize() const {
    nlohmann::json j{{"seq", seq}, {"session", session}, {"kind", kind}, {"payload", payload}};
    return j.dump();
}

WireMessage WireMessage::parse(const std::string& line) {
    nlohmann::json j = nlohmann::json::parse(line);
    WireMessage m;
    m.seq = j.at("seq").get<uint64_t>();
    m.session = j.at("session").get<uint64_t>();
    m.kind = j.at("kind").get<std::string>();
    m.payload = j.value("payload", nlohmann::json::object());
    return m;
}

uint64_t Transcript::digest() const {
    uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& e : entries) h = fnv1a(e.line, h);
    return h;
}

void Transcript::save_jsonl(const std::string& path) const {
    std::ofstream out(path);
    for (const auto& e : entries) {
        nlohmann::json j{{"dir", e.outbound ? "out" : "in"}, {"t", e.wall_time},
                         {"msg", nlohmann::json::parse(e.line)}};
        out << j.dump() << "\n";
    }
}

bool Transcript::contains(const std::string& needle) const {
    for (const auto& e : entries)
        if (e.line.find(needle) != std::string::npos) return true;
    return false;
}

bool validate_pairing(const Transcript& t, std::string* why) {
    long open_photons = 0;
    long owed_teleports = 0;
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (const auto& e : t.entries) {
        WireMessage m = WireMessage::parse(e.line);
        if (m.kind == "PHOTON") {
            if (open_photons > 0) return fail("PHOTON while a photon is unanswered");
            if (owed_teleports > 0) return fail("PHOTON while a teleport result is owed");
            ++open_photons;
        } else if (m.kind == "CLICK") {
            if (open_photons != 1) return fail("CLICK without a pending PHOTON");
            --open_photons;
            if (m.payload.at("success").get<bool>()) ++owed_teleports;
        } else if (m.kind == "TELEPORT_RESULT") {
            if (owed_teleports != 1) return fail("TELEPORT_RESULT without a successful CLICK");
            --owed_teleports;
        }
    }
    if (open_photons || owed_teleports) return fail("unanswered PHOTON or missing TELEPORT_RESULT");
    return true;
}

nlohmann::json server_visible_structure(const CircuitIR& program) {
    nlohmann::json j = program.to_json();
    j.erase("seed");
    for (auto& g : j["gates"]) {
        if (g["kind"] == "b_theta") g.erase("p");  // the client's secret
    }
    return j;
}

// ---------------------------------------------------------------------------
// Server
// ---------------------------------------------------------------------------

Server::Server(ErrorModel model, ServerOptions options)
    : model_(std::move(model)), options_(std::move(options)) {
    options_.timeout_ms = env_timeout_ms(options_.timeout_ms);
}

Server::~Server() { stop(); }

void Server::stop() {
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
}

int Server::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(uint16_t(options_.port));
    if (inet_pton(AF_INET, options_.bind_host.c_str(), &addr.sin_addr) != 1)
        throw std::runtime_error("bad bind address");
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
        throw std::runtime_error("bind() failed");
    if (::listen(listen_fd_, 1) != 0) throw std::runtime_error("listen() failed");
    socklen_t len = sizeof(addr);
    getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    options_.port = ntohs(addr.sin_port);
    return options_.port;
}

ServerReport Server::serve_one() {
    ServerReport report;
    const int conn = ::accept(listen_fd_, nullptr, nullptr);
    if (conn < 0) {
        report.error = "accept() failed";
        return report;
    }
    ScopedFd guard(conn);
    Channel ch(conn, options_.timeout_ms, options_.rtt_ms, now_seconds());
    RngStream server_rng(options_.seed, "netlink-server");

    try {
        WireMessage hello = ch.recv();
        if (hello.kind != "HELLO") throw std::runtime_error("expected HELLO");
        const uint64_t session = hello.session;
        const int c = hello.payload.at("c").get<int>();
        const long batch = hello.payload.value("batch", 1000l);
        AngleSet set(c);  // validates the announced resolution
        (void)set;

        WireMessage ops = ch.recv();
        if (ops.kind != "LOCAL_OPS") throw std::runtime_error("expected LOCAL_OPS");
        const nlohmann::json structure = ops.payload.at("program");

        // walk the program; delegated slots drive the photon loop
        long slot = 0;
        for (const auto& g : structure.at("gates")) {
            if (g.at("kind") != "b_theta") continue;  // local ops run silently
            if (slot > 0 && batch > 0 && slot % batch == 0) {
                WireMessage sync = ch.recv();
                if (sync.kind != "FRAME_SYNC") throw std::runtime_error("expected FRAME_SYNC");
                WireMessage ack;
                ack.session = session;
                ack.kind = "FRAME_SYNC";
                ack.payload = {{"measurement_digest", report.done_digest}};
                ch.send(ack);
            }
            RngStream gate_rng = server_rng.split("gate", uint64_t(slot));
            for (int iteration = 0; iteration < c; ++iteration) {
                // photon attempts until the client heralds a click
                bool clicked = false;
                while (!clicked) {
                    WireMessage photon;
                    photon.session = session;
                    photon.kind = "PHOTON";
                    photon.payload = {{"gate_session", slot}, {"iteration", iteration}};
                    ch.send(photon);
                    ++report.photons_sent;
                    WireMessage click = ch.recv();
                    if (click.kind != "CLICK") throw std::runtime_error("expected CLICK");
                    clicked = click.payload.at("success").get<bool>();
                }
                const int m = gate_rng.bit();
                report.done_digest = fnv1a(std::to_string(m), report.done_digest);
                WireMessage tr;
                tr.session = session;
                tr.kind = "TELEPORT_RESULT";
                tr.payload = {{"m", m}};
                ch.send(tr);
                if (m == 0) break;  // rotation landed; otherwise retry doubled
            }
            ++slot;
            ++report.gates_completed;
        }

        WireMessage done = ch.recv();
        if (done.kind != "DONE") throw std::runtime_error("expected DONE");
        WireMessage reply;
        reply.session = session;
        reply.kind = "DONE";
        reply.payload = {{"transcript_hash", ch.transcript.digest()}};
        ch.send(reply);
        report.ok = true;
    } catch (const std::exception& ex) {
        report.error = ex.what();
        try {
            WireMessage err;
            err.kind = "ERROR";
            err.payload = {{"category", "protocol"}, {"what", ex.what()}};
            ch.send(err);
        } catch (...) {
        }
        if (!options_.transcript_path.empty()) {
            // resumable state dump alongside the transcript
            nlohmann::json dump{{"photons_sent", report.photons_sent},
                                {"gates_completed", report.gates_completed},
                                {"error", report.error}};
            std::ofstream(options_.transcript_path + ".dump") << dump.dump(2) << "\n";
        }
    }
    report.transcript = ch.transcript;
    if (!options_.transcript_path.empty()) ch.transcript.save_jsonl(options_.transcript_path);
    return report;
}

// ---------------------------------------------------------------------------
// Client
// ---------------------------------------------------------------------------

namespace {

// Shared by both transports: the client-side physical simulation. The B-slot
// angle is adapted through the frame's X bit so the delegated rotation
// implements the intended one; the Z^s byproduct is absorbed into the frame.
struct ClientSim {
    explicit ClientSim(const CircuitIR& program)
        : set(program.c), psi(program.n_qubits), frame(program.n_qubits) {}

    AngleSet set;
    StateVector psi;
    PauliFrame frame;

    uint32_t effective_index(const CircuitGate& g) const {
        const int a = frame.x_bit(g.qubits[0]);
        return a ? set.wrap(-int64_t(g.p)) : g.p;
    }

    void apply_local(const CircuitGate& g) {
        switch (g.kind) {
            case CircuitGateKind::LocalClifford:
                if (g.qubits.size() == 2) {
                    psi.apply(GateSpec::named(g.clifford), g.qubits[0], g.qubits[1]);
                    frame.conjugate(GateSpec::named(g.clifford), g.qubits[0], g.qubits[1]);
                } else {
                    psi.apply(GateSpec::named(g.clifford), g.qubits[0]);
                    frame.conjugate(GateSpec::named(g.clifford), g.qubits[0]);
                }
                break;
            case CircuitGateKind::Local1QRot:
                psi.apply(GateSpec::rz(g.theta), g.qubits[0]);
                break;
            case CircuitGateKind::Local2Q:
                psi.apply(GateSpec::u2q(local_2q_unitary(g.theta)), g.qubits[0], g.qubits[1]);
                break;
            default:
                throw std::logic_error("apply_local on a delegated gate");
        }
    }

    void apply_delegated(const CircuitGate& g, uint32_t implemented_index, int s) {
        psi.apply(GateSpec::rz(set.angle(implemented_index)), g.qubits[0]);
        if (s) psi.apply(GateSpec::named(GateKind::Z), g.qubits[0]);
        frame.absorb_measurement(g.qubits[0], s, PauliFrame::MeasurementKind::PhotonZ);
    }

    uint64_t digest() const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (size_t i = 0; i < psi.dim(); ++i) {
            const cx a = psi.amp(i);
            const double re = a.real(), im = a.imag();
            h = fnv1a(std::string_view(reinterpret_cast<const char*>(&re), sizeof(re)), h);
            h = fnv1a(std::string_view(reinterpret_cast<const char*>(&im), sizeof(im)), h);
        }
        for (int q = 0; q < frame.n_qubits(); ++q) {
            h = fnv1a(frame.x_bit(q) ? "1" : "0", h);
            h = fnv1a(frame.z_bit(q) ? "1" : "0", h);
        }
        return h;
    }
};

}  // namespace

ClientReport run_client(const CircuitIR& program, const ErrorModel& model,
                        const ClientOptions& options) {
    ClientReport report;
    const double t0 = now_seconds();
    const int timeout = env_timeout_ms(options.timeout_ms);

    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        report.error = "socket() failed";
        return report;
    }
    ScopedFd guard(fd);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(uint16_t(options.port));
    if (inet_pton(AF_INET, options.host.c_str(), &addr.sin_addr) != 1) {
        report.error = "bad host";
        return report;
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        report.error = "connect() failed";
        return report;
    }

    Channel ch(fd, timeout, 0, t0);
    RngStream client_rng(options.seed, "netlink-client");
    const uint64_t session = RngStream(options.seed, "session-id").u64();
    const long batch = 1000;

    try {
        WireMessage hello;
        hello.session = session;
        hello.kind = "HELLO";
        hello.payload = {{"c", program.c}, {"n_qubits", program.n_qubits}, {"batch", batch}};
        ch.send(hello);

        WireMessage ops;
        ops.session = session;
        ops.kind = "LOCAL_OPS";
        ops.payload = {{"program", server_visible_structure(program)}};
        ch.send(ops);

        ClientSim sim(program);
        long slot = 0;
        for (const auto& g : program.gates) {
            if (g.kind != CircuitGateKind::BTheta) {
                sim.apply_local(g);
                continue;
            }
            if (slot > 0 && slot % batch == 0) {
                WireMessage sync;
                sync.session = session;
                sync.kind = "FRAME_SYNC";
                uint64_t fdg = 0;
                for (int q = 0; q < sim.frame.n_qubits(); ++q)
                    fdg = fnv1a(sim.frame.x_bit(q) ? "x" : "i", fdg + sim.frame.z_bit(q));
                sync.payload = {{"measurement_digest", fdg}};
                ch.send(sync);
                WireMessage ack = ch.recv();
                if (ack.kind != "FRAME_SYNC") throw std::runtime_error("expected FRAME_SYNC ack");
                ++report.frame_syncs;
            }
            const double gate_t0 = now_seconds();
            RngStream gate_rng = client_rng.split("gate", uint64_t(slot));
            BGateSession bsession(sim.set, sim.effective_index(g));
            while (bsession.status() != BGateSession::Status::Done) {
                WireMessage msg = ch.recv();
                if (msg.kind == "PHOTON") {
                    bsession.photon_sent();
                    const bool real_click = gate_rng.bernoulli(model.eta);
                    bool dark_click = false;
                    if (!real_click && model.p_dark > 0.0)
                        dark_click = gate_rng.bernoulli(model.p_dark);
                    WireMessage click;
                    click.session = session;
                    click.kind = "CLICK";
                    if (real_click || dark_click) {
                        const int s = gate_rng.bit();
                        bsession.photon_measured(s, dark_click);
                        click.payload = {{"success", true},
                                         {"s", options.reveal_s ? nlohmann::json(s) : nlohmann::json()}};
                    } else {
                        bsession.photon_lost();
                        click.payload = {{"success", false}, {"s", nullptr}};
                    }
                    ch.send(click);
                } else if (msg.kind == "TELEPORT_RESULT") {
                    bsession.teleport_result(msg.payload.at("m").get<int>());
                } else {
                    throw std::runtime_error("unexpected message kind " + msg.kind);
                }
            }
            GateOutcome outcome;
            outcome.slot = uint32_t(slot);
            outcome.s = bsession.frame_bit();
            outcome.iterations = bsession.iteration() < sim.set.c ? bsession.iteration() + 1 : sim.set.c;
            outcome.photons_sent = bsession.photons_sent();
            outcome.photons_measured = bsession.photons_measured();
            report.gates.push_back(outcome);
            report.per_gate_seconds.push_back(now_seconds() - gate_t0);
            sim.apply_delegated(g, bsession.implemented_index(), bsession.frame_bit());
            ++slot;
        }

        WireMessage done;
        done.session = session;
        done.kind = "DONE";
        done.payload = {{"transcript_hash", ch.transcript.digest()}};
        ch.send(done);
        WireMessage server_done = ch.recv();
        if (server_done.kind != "DONE") throw std::runtime_error("expected DONE");

        report.state_digest = sim.digest();
        report.frame = sim.frame;
        report.ok = true;
    } catch (const std::exception& ex) {
        report.error = ex.what();
    }
    report.transcript = ch.transcript;
    if (!options.transcript_path.empty()) ch.transcript.save_jsonl(options.transcript_path);
    report.wall_seconds = now_seconds() - t0;

    // audit: no secret angle bytes may appear anywhere on the wire (revealed
    // local rotation angles are allowed; blind entries are not)
    report.audit_ok = true;
    for (const auto& e : report.transcript.entries) {
        if (!e.outbound) continue;
        WireMessage m = WireMessage::parse(e.line);
        if (m.kind == "LOCAL_OPS") {
            for (const auto& g : m.payload.at("program").at("gates")) {
                if (g.at("kind") == "b_theta" && (g.contains("p") || g.contains("theta")))
                    report.audit_ok = false;
            }
        }
        if (m.kind == "CLICK" && !options.reveal_s) {
            if (!m.payload.at("s").is_null()) report.audit_ok = false;
        }
    }
    return report;
}

LocalRunResult run_program_local(const CircuitIR& program, const ErrorModel& model,
                                 uint64_t client_seed, uint64_t server_seed) {
    RngStream client_rng(client_seed, "netlink-client");
    RngStream server_rng(server_seed, "netlink-server");
    ClientSim sim(program);
    LocalRunResult out;
    long slot = 0;
    for (const auto& g : program.gates) {
        if (g.kind != CircuitGateKind::BTheta) {
            sim.apply_local(g);
            continue;
        }
        RngStream gate_client = client_rng.split("gate", uint64_t(slot));
        RngStream gate_server = server_rng.split("gate", uint64_t(slot));
        BGateSession session(sim.set, sim.effective_index(g));
        BGateOutcome b = run_b_gate(session, model, gate_client, gate_server);
        GateOutcome outcome;
        outcome.slot = uint32_t(slot);
        outcome.s = b.s;
        outcome.iterations = b.iterations;
        outcome.photons_sent = b.photons_sent;
        outcome.photons_measured = b.photons_measured;
        out.gates.push_back(outcome);
        sim.apply_delegated(g, b.angle_index, b.s);
        ++slot;
    }
    out.state_digest = sim.digest();
    out.frame = sim.frame;
    return out;
}

}  // namespace bqc::netlink
