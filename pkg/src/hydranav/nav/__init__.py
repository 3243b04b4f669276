"""Sensor-based navigation: worlds, raycasting, local free space, the
move-to-projected-goal loop, and monitor-judged traces."""

from .controller import (  # noqa: F401
    AtGoal, Outcome, SafetyAbort, SeparationViolation, Timeout, Trace,
    TraceStep, check_initial_clearance, nearest_surface_points,
    run_controller, separation_check, step_dynamics,
)
from .geometry import (  # noqa: F401
    DegenerateArc, EmptyPolygon, circumcircle, clip_halfplane,
    detect_components, estimate_obstacles, local_free_space,
    polygon_contains, project_goal, regular_ngon,
)
from .sensor import (  # noqa: F401
    HandleLeak, HandleReuse, InsideObstacle, SensorHandle, open_sensor, sense,
)
from .trace_io import (  # noqa: F401
    load_trace_positions, render_svg, save_svg, save_trace_csv, trace_to_csv,
)
from .world import (  # noqa: F401
    Disk, NavParams, World, WorldGenParams, generate_violation_world,
    generate_world, load_world, save_world, surface_gap, world_from_doc,
    world_to_doc,
)
