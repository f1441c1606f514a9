#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bqc/circuit.hpp"
#include "bqc/errormodel.hpp"
#include "bqc/pauliframe.hpp"
#include "bqc/rng.hpp"

namespace bqc::netlink {

// Newline-delimited JSON envelope. Kinds: HELLO, LOCAL_OPS, PHOTON, CLICK,
// TELEPORT_RESULT, FRAME_SYNC, SYNDROME, DONE, ERROR. seq increases strictly
// per direction; every PHOTON is answered by exactly one CLICK and every
// successful CLICK by exactly one TELEPORT_RESULT.
struct WireMessage {
    uint64_t seq = 0;
    uint64_t session = 0;
    std::string kind;
    nlohmann::json payload;

    std::string serialize() const;
    static WireMessage parse(const std::string& line);
};

struct TranscriptEntry {
    bool outbound = false;
    double wall_time = 0.0;  // seconds since session start
    std::string line;
};

struct Transcript {
    std::vector<TranscriptEntry> entries;

    // digest over the message bytes only (timestamps excluded), so both ends
    // agree on it
    uint64_t digest() const;
    void save_jsonl(const std::string& path) const;
    bool contains(const std::string& needle) const;
};

// Message-pairing invariants on a transcript (either side's view).
bool validate_pairing(const Transcript& t, std::string* why = nullptr);

struct GateOutcome {
    uint32_t slot = 0;     // B-slot index within the program
    int s = 0;
    int iterations = 0;
    long photons_sent = 0;
    long photons_measured = 0;
};

struct ServerOptions {
    std::string bind_host = "127.0.0.1";
    int port = 0;  // 0: ephemeral
    uint64_t seed = 0;
    int rtt_ms = 0;  // artificial latency injected on server sends
    std::string transcript_path;
    int timeout_ms = 10000;
};

struct ServerReport {
    bool ok = false;
    std::string error;
    Transcript transcript;
    long photons_sent = 0;
    long gates_completed = 0;
    uint64_t done_digest = 0;
};

// One-session server. start() binds and listens (returns the bound port);
// serve_one() accepts a single connection and drives it to completion.
class Server {
public:
    Server(ErrorModel model, ServerOptions options);
    ~Server();
    int start();
    ServerReport serve_one();
    void stop();

private:
    ErrorModel model_;
    ServerOptions options_;
    int listen_fd_ = -1;
};

struct ClientOptions {
    std::string host = "127.0.0.1";
    int port = 0;
    uint64_t seed = 0;
    int timeout_ms = 10000;
    bool reveal_s = false;  // debug only: populate CLICK.s (normally redacted)
    std::string transcript_path;
};

struct ClientReport {
    bool ok = false;
    std::string error;
    std::vector<GateOutcome> gates;
    uint64_t state_digest = 0;
    PauliFrame frame;
    Transcript transcript;
    bool audit_ok = false;  // no secret angle bytes on the wire
    double wall_seconds = 0.0;
    std::vector<double> per_gate_seconds;
    long frame_syncs = 0;
};

// Drive a session against a server: upload the angle-stripped structure,
// perform the photon measurements (loss, dark counts and outcomes sampled
// client-side), track the Pauli frame, and maintain the local state-vector
// simulation of the physical sequence.
ClientReport run_client(const CircuitIR& program, const ErrorModel& model,
                        const ClientOptions& options);

struct LocalRunResult {
    std::vector<GateOutcome> gates;
    uint64_t state_digest = 0;
    PauliFrame frame;
};

// In-process reference with the same randomness discipline as the wire pair;
// the dual-transport equivalence oracle.
LocalRunResult run_program_local(const CircuitIR& program, const ErrorModel& model,
                                 uint64_t client_seed, uint64_t server_seed);

// The angle-stripped, server-visible version of a program (blind entries
// keep their position but lose p).
nlohmann::json server_visible_structure(const CircuitIR& program);

}  // namespace bqc::netlink
