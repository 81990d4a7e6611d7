"""
Convex Recoloring Desk
Paste instance → pick algorithm → inspect cover, recoloring and trace → Export
"""

import streamlit as st
import sys
from dataclasses import replace
from pathlib import Path
from datetime import datetime
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from models import InstanceError, InvariantViolation, ExportFormat, DomainPolicy, format_rational
from config_manager import ConfigManager
from cache_manager import OracleCache
from instance_parser import parse_instance_text
from instance_core import complete_to_convex
from penalty import lower_bound
from oracle import exact_opt
from harness import ALGORITHMS, run_algorithm, finalize_result
from result_checker import ResultChecker
from result_exporter import ResultExporter


# ============================================================================
# PAGE CONFIG
# ============================================================================

st.set_page_config(
    page_title="Recoloring Desk",
    page_icon="🎨",
    layout="centered",
    initial_sidebar_state="collapsed"
)

st.markdown("""
<style>
    .main .block-container {
        padding-top: 1.5rem;
        max-width: 900px;
    }
    h1 { font-size: 1.8rem !important; margin-bottom: 0.5rem !important; }
</style>
""", unsafe_allow_html=True)


# ============================================================================
# SESSION STATE
# ============================================================================

if 'config_manager' not in st.session_state:
    st.session_state.config_manager = ConfigManager()
    st.session_state.config = st.session_state.config_manager.load()

if 'result' not in st.session_state:
    st.session_state.result = None  # JSON payload of the last run
    st.session_state.rows = []
    st.session_state.issues = []

config = st.session_state.config


# ============================================================================
# SIDEBAR - Settings and oracle cache
# ============================================================================

with st.sidebar:
    st.markdown("## ⚙️ Settings")
    st.caption(f"Exact oracle capped at {config.oracle_cap} vertices · domain policy `{config.domain_policy}`")

    with st.expander("Edit settings"):
        new_cap = st.number_input("Oracle cap", min_value=1, value=config.oracle_cap,
                                  key="oracle_cap_input")
        policies = [p.value for p in DomainPolicy]
        new_policy = st.selectbox("Domain policy", policies, index=policies.index(config.domain_policy),
                                  key="policy_select")
        col1, col2 = st.columns(2)
        if col1.button("Save", key="save_settings", use_container_width=True):
            st.session_state.config = replace(config, oracle_cap=int(new_cap), domain_policy=new_policy)
            st.session_state.config_manager.update_config(st.session_state.config)
            st.rerun()
        if col2.button("Reset", key="reset_settings", use_container_width=True):
            st.session_state.config = st.session_state.config_manager.reset_to_default()
            for key in ("oracle_cap_input", "policy_select"):
                st.session_state.pop(key, None)
            st.rerun()

    st.divider()

    cache = OracleCache(config.cache_dir, config.cache_ttl_days)
    cache_stats = cache.get_stats()

    col1, col2 = st.columns(2)
    col1.metric("Cached optima", cache_stats["entries"])
    col2.metric("Size", f"{cache_stats['total_size_kb']:.1f} KB")

    if st.button("Clear Cache", use_container_width=True):
        cache.clear()
        st.toast("Cache cleared!")


# ============================================================================
# SOLVE
# ============================================================================

MODES = ["tree3", "tree4", "string2", "string3", "lowerbound", "exact"]


def solve(text: str, mode: str):
    """
    Run one mode on pasted instance text

    Returns:
        (payload, rows, issues)
    """
    inst = parse_instance_text(text, config.policy)
    report = lower_bound(inst)

    if mode == "lowerbound":
        return report.to_dict(inst), report.to_rows(inst), []

    if mode == "exact":
        cover, opt = exact_opt(inst, config.oracle_cap, cache if config.use_cache else None)
        coloring = complete_to_convex(inst, inst.coloring().without(cover.members))
        payload = {
            "algorithm": "exact",
            "cost": format_rational(opt),
            "cover": cover.to_ids(inst),
            "coloring": coloring.to_dict(inst.ids),
            "lower_bound": format_rational(report.lower_bound),
            "opt": format_rational(opt),
        }
        rows = [{"id": vid, "color": inst.colors[v] or "", "recolored": coloring[v], "in_cover": v in cover}
                for v, vid in enumerate(inst.ids)]
        return payload, rows, []

    result = finalize_result(inst, run_algorithm(mode, inst))
    opt = None
    if inst.n <= config.oracle_cap:
        _, opt = exact_opt(inst, config.oracle_cap, cache if config.use_cache else None)
    issues = ResultChecker().check(inst, result, report.lower_bound, opt)
    payload = result.to_dict(inst, lower_bound=report.lower_bound, opt=opt, include_trace=True)
    payload["rounds"] = result.rounds
    return payload, result.to_rows(inst), issues


# ============================================================================
# MAIN APP
# ============================================================================

st.markdown("# 🎨 Convex Recoloring Desk")

# ============================================================================
# STEP 1: INPUT
# ============================================================================

st.markdown("### 📝 Paste Instance")

instance_text = st.text_area(
    "Instance",
    height=180,
    placeholder="""R\t1
G\t1
R\t1""",
    label_visibility="collapsed",
    key="instance_input"
)

col1, col2, col3 = st.columns([2, 2, 1])

with col1:
    mode = st.selectbox("Algorithm", MODES, key="algorithm", label_visibility="collapsed")

with col2:
    if st.button("▶ Run", type="primary", use_container_width=True, disabled=not instance_text,
                 key="run_button"):
        try:
            with st.spinner("Solving..."):
                payload, rows, issues = solve(instance_text, mode)
            st.session_state.result = payload
            st.session_state.rows = rows
            st.session_state.issues = issues
        except InstanceError as e:
            st.session_state.result = None
            st.error(f"Invalid instance: {e}")
        except InvariantViolation as e:
            st.session_state.result = None
            st.error(f"Internal guarantee violated: {e}")

with col3:
    if st.button("Clear", use_container_width=True, key="clear_button"):
        st.session_state.result = None
        st.session_state.rows = []
        st.session_state.issues = []

st.divider()

# ============================================================================
# STEP 2: RESULT & EXPORT
# ============================================================================

if st.session_state.result:
    result = st.session_state.result

    if "cost" in result:
        m1, m2, m3 = st.columns(3)
        m1.metric("Cost", result["cost"])
        m2.metric("Lower bound", result["lower_bound"])
        m3.metric("OPT", result["opt"] if result.get("opt") is not None else "n/a")
        st.markdown(f"**Cover:** {', '.join(result['cover']) or '∅'}")
    else:
        m1, m2 = st.columns(2)
        m1.metric("Σ p*", result["sum_p_star"])
        m2.metric("Lower bound", result["lower_bound"])

    for issue in st.session_state.issues:
        if issue["severity"] == "error":
            st.error(issue["issue"])
        elif issue["severity"] == "warning":
            st.warning(issue["issue"])
        else:
            st.caption(f"✓ {issue['issue']}")

    st.dataframe(st.session_state.rows, use_container_width=True)

    if result.get("trace"):
        with st.expander(f"📜 Reduction trace ({len(result['trace'])} rounds)"):
            st.json(result["trace"])

    exporter = ResultExporter()
    timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    dl1, dl2 = st.columns(2)
    for column, fmt in ((dl1, ExportFormat.JSON), (dl2, ExportFormat.CSV)):
        with column:
            content = exporter.export(result, st.session_state.rows, fmt)
            st.download_button(
                f"📄 .{exporter.get_file_extension(fmt)}",
                data=content.encode('utf-8'),
                file_name=f"recolor_{timestamp}.{exporter.get_file_extension(fmt)}",
                mime=exporter.get_mime_type(fmt),
                use_container_width=True,
            )

else:
    st.info("👆 Paste an instance and click **Run**")

    with st.expander("Supported formats"):
        st.markdown("""
        **String shorthand:** one `color<TAB>weight` line per vertex, `-` for uncolored

        **JSON:** `{"kind": "tree", "vertices": [{"id": "a", "weight": "1", "color": "R"}], "edges": [["a", "b"]]}`
        """)
        st.caption("Algorithms: " + ", ".join(sorted(ALGORITHMS)))
