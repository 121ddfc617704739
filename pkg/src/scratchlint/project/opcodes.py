"""Opcode tables for the standard Scratch 3.0 palette plus the pen extension.

Each entry maps a ``project.json`` opcode to the AST kind it parses into, the
ordered input slots (name and slot type), the fields it carries, the names of
its sub-stacks and a scratchblocks template used by the renderer.

Slot types: ``num``, ``text``, ``bool``, ``color``, ``menu`` (a dropdown
input, usually filled by a shadow menu block), ``touch`` (the touching-object
menu), ``broadcast``.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BlockSpec:
    kind: str
    inputs: tuple[tuple[str, str], ...] = ()
    fields: tuple[str, ...] = ()
    substacks: tuple[str, ...] = ()
    template: str = ""
    boolean: bool = False


def _s(kind, template, inputs=(), fields=(), substacks=()):
    return BlockSpec(kind, tuple(inputs), tuple(fields), tuple(substacks), template)


def _r(template, inputs=(), fields=(), boolean=False, kind="Reporter"):
    return BlockSpec(kind, tuple(inputs), tuple(fields), (), template, boolean)


N, T, B, C, M = "num", "text", "bool", "color", "menu"

HAT_OPCODES = {
    "event_whenflagclicked": "GreenFlag",
    "event_whenkeypressed": "KeyPressed",
    "event_whenthisspriteclicked": "SpriteClicked",
    "event_whenstageclicked": "SpriteClicked",
    "event_whenbackdropswitchesto": "BackdropSwitchTo",
    "event_whenbroadcastreceived": "ReceptionOfMessage",
    "control_start_as_clone": "StartedAsClone",
    "event_whengreaterthan": "GreaterThan",
}

PROCEDURE_DEFINITION = "procedures_definition"
PROCEDURE_PROTOTYPE = "procedures_prototype"
PROCEDURE_CALL = "procedures_call"

STATEMENTS: dict[str, BlockSpec] = {
    # motion
    "motion_movesteps": _s("MoveSteps", "move {STEPS} steps", [("STEPS", N)]),
    "motion_turnright": _s("TurnRight", "turn right {DEGREES} degrees", [("DEGREES", N)]),
    "motion_turnleft": _s("TurnLeft", "turn left {DEGREES} degrees", [("DEGREES", N)]),
    "motion_goto": _s("GoTo", "go to {TO}", [("TO", M)]),
    "motion_gotoxy": _s("GoToXY", "go to x: {X} y: {Y}", [("X", N), ("Y", N)]),
    "motion_glideto": _s("GlideTo", "glide {SECS} secs to {TO}", [("SECS", N), ("TO", M)]),
    "motion_glidesecstoxy": _s(
        "GlideSecsToXY", "glide {SECS} secs to x: {X} y: {Y}", [("SECS", N), ("X", N), ("Y", N)]
    ),
    "motion_pointindirection": _s(
        "PointInDirection", "point in direction {DIRECTION}", [("DIRECTION", N)]
    ),
    "motion_pointtowards": _s("PointTowards", "point towards {TOWARDS}", [("TOWARDS", M)]),
    "motion_changexby": _s("ChangeXBy", "change x by {DX}", [("DX", N)]),
    "motion_setx": _s("SetX", "set x to {X}", [("X", N)]),
    "motion_changeyby": _s("ChangeYBy", "change y by {DY}", [("DY", N)]),
    "motion_sety": _s("SetY", "set y to {Y}", [("Y", N)]),
    "motion_ifonedgebounce": _s("IfOnEdgeBounce", "if on edge, bounce"),
    "motion_setrotationstyle": _s(
        "SetRotationStyle", "set rotation style [{STYLE} v]", fields=["STYLE"]
    ),
    # looks
    "looks_sayforsecs": _s(
        "SayForSecs", "say {MESSAGE} for {SECS} seconds", [("MESSAGE", T), ("SECS", N)]
    ),
    "looks_say": _s("Say", "say {MESSAGE}", [("MESSAGE", T)]),
    "looks_thinkforsecs": _s(
        "ThinkForSecs", "think {MESSAGE} for {SECS} seconds", [("MESSAGE", T), ("SECS", N)]
    ),
    "looks_think": _s("Think", "think {MESSAGE}", [("MESSAGE", T)]),
    "looks_switchcostumeto": _s(
        "SwitchCostumeTo", "switch costume to {COSTUME}", [("COSTUME", M)]
    ),
    "looks_nextcostume": _s("NextCostume", "next costume"),
    "looks_switchbackdropto": _s(
        "SwitchBackdropTo", "switch backdrop to {BACKDROP}", [("BACKDROP", M)]
    ),
    "looks_switchbackdroptoandwait": _s(
        "SwitchBackdropToAndWait", "switch backdrop to {BACKDROP} and wait", [("BACKDROP", M)]
    ),
    "looks_nextbackdrop": _s("NextBackdrop", "next backdrop"),
    "looks_changesizeby": _s("ChangeSizeBy", "change size by {CHANGE}", [("CHANGE", N)]),
    "looks_setsizeto": _s("SetSizeTo", "set size to {SIZE} %", [("SIZE", N)]),
    "looks_changeeffectby": _s(
        "ChangeEffectBy", "change [{EFFECT} v] effect by {CHANGE}", [("CHANGE", N)], ["EFFECT"]
    ),
    "looks_seteffectto": _s(
        "SetEffectTo", "set [{EFFECT} v] effect to {VALUE}", [("VALUE", N)], ["EFFECT"]
    ),
    "looks_cleargraphiceffects": _s("ClearGraphicEffects", "clear graphic effects"),
    "looks_show": _s("Show", "show"),
    "looks_hide": _s("Hide", "hide"),
    "looks_gotofrontback": _s(
        "GoToFrontBack", "go to [{FRONT_BACK} v] layer", fields=["FRONT_BACK"]
    ),
    "looks_goforwardbackwardlayers": _s(
        "GoForwardBackwardLayers",
        "go [{FORWARD_BACKWARD} v] {NUM} layers",
        [("NUM", N)],
        ["FORWARD_BACKWARD"],
    ),
    # sound
    "sound_playuntildone": _s(
        "PlaySoundUntilDone", "play sound {SOUND_MENU} until done", [("SOUND_MENU", M)]
    ),
    "sound_play": _s("StartSound", "start sound {SOUND_MENU}", [("SOUND_MENU", M)]),
    "sound_stopallsounds": _s("StopAllSounds", "stop all sounds"),
    "sound_changeeffectby": _s(
        "ChangeSoundEffectBy", "change [{EFFECT} v] effect by {VALUE}", [("VALUE", N)], ["EFFECT"]
    ),
    "sound_seteffectto": _s(
        "SetSoundEffectTo", "set [{EFFECT} v] effect to {VALUE}", [("VALUE", N)], ["EFFECT"]
    ),
    "sound_cleareffects": _s("ClearSoundEffects", "clear sound effects"),
    "sound_changevolumeby": _s("ChangeVolumeBy", "change volume by {VOLUME}", [("VOLUME", N)]),
    "sound_setvolumeto": _s("SetVolumeTo", "set volume to {VOLUME} %", [("VOLUME", N)]),
    # events
    "event_broadcast": _s("Broadcast", "broadcast {BROADCAST_INPUT}", [("BROADCAST_INPUT", "broadcast")]),
    "event_broadcastandwait": _s(
        "BroadcastAndWait", "broadcast {BROADCAST_INPUT} and wait", [("BROADCAST_INPUT", "broadcast")]
    ),
    # control
    "control_wait": _s("WaitSeconds", "wait {DURATION} seconds", [("DURATION", N)]),
    "control_repeat": _s("RepeatTimes", "repeat {TIMES}", [("TIMES", N)], substacks=["SUBSTACK"]),
    "control_forever": _s("Forever", "forever", substacks=["SUBSTACK"]),
    "control_if": _s("IfThen", "if {CONDITION} then", [("CONDITION", B)], substacks=["SUBSTACK"]),
    "control_if_else": _s(
        "IfElse", "if {CONDITION} then", [("CONDITION", B)], substacks=["SUBSTACK", "SUBSTACK2"]
    ),
    "control_wait_until": _s("WaitUntil", "wait until {CONDITION}", [("CONDITION", B)]),
    "control_repeat_until": _s(
        "RepeatUntil", "repeat until {CONDITION}", [("CONDITION", B)], substacks=["SUBSTACK"]
    ),
    "control_stop": _s("Stop", "stop [{STOP_OPTION} v]", fields=["STOP_OPTION"]),
    "control_create_clone_of": _s(
        "CreateCloneOf", "create clone of {CLONE_OPTION}", [("CLONE_OPTION", M)]
    ),
    "control_delete_this_clone": _s("DeleteThisClone", "delete this clone"),
    # sensing
    "sensing_askandwait": _s("AskAndWait", "ask {QUESTION} and wait", [("QUESTION", T)]),
    "sensing_setdragmode": _s("SetDragMode", "set drag mode [{DRAG_MODE} v]", fields=["DRAG_MODE"]),
    "sensing_resettimer": _s("ResetTimer", "reset timer"),
    # data
    "data_setvariableto": _s("SetVariable", "set [{VARIABLE} v] to {VALUE}", [("VALUE", T)], ["VARIABLE"]),
    "data_changevariableby": _s(
        "ChangeVariableBy", "change [{VARIABLE} v] by {VALUE}", [("VALUE", N)], ["VARIABLE"]
    ),
    "data_showvariable": _s("ShowVariable", "show variable [{VARIABLE} v]", fields=["VARIABLE"]),
    "data_hidevariable": _s("HideVariable", "hide variable [{VARIABLE} v]", fields=["VARIABLE"]),
    "data_addtolist": _s("AddToList", "add {ITEM} to [{LIST} v]", [("ITEM", T)], ["LIST"]),
    "data_deleteoflist": _s("DeleteOfList", "delete {INDEX} of [{LIST} v]", [("INDEX", N)], ["LIST"]),
    "data_deletealloflist": _s("DeleteAllOfList", "delete all of [{LIST} v]", fields=["LIST"]),
    "data_insertatlist": _s(
        "InsertAtList", "insert {ITEM} at {INDEX} of [{LIST} v]", [("ITEM", T), ("INDEX", N)], ["LIST"]
    ),
    "data_replaceitemoflist": _s(
        "ReplaceItemOfList",
        "replace item {INDEX} of [{LIST} v] with {ITEM}",
        [("INDEX", N), ("ITEM", T)],
        ["LIST"],
    ),
    "data_showlist": _s("ShowList", "show list [{LIST} v]", fields=["LIST"]),
    "data_hidelist": _s("HideList", "hide list [{LIST} v]", fields=["LIST"]),
    # pen
    "pen_clear": _s("EraseAll", "erase all"),
    "pen_stamp": _s("Stamp", "stamp"),
    "pen_penDown": _s("PenDown", "pen down"),
    "pen_penUp": _s("PenUp", "pen up"),
    "pen_setPenColorToColor": _s("SetPenColorToColor", "set pen color to {COLOR}", [("COLOR", C)]),
    "pen_changePenColorParamBy": _s(
        "ChangePenColorParamBy", "change pen {COLOR_PARAM} by {VALUE}", [("COLOR_PARAM", M), ("VALUE", N)]
    ),
    "pen_setPenColorParamTo": _s(
        "SetPenColorParamTo", "set pen {COLOR_PARAM} to {VALUE}", [("COLOR_PARAM", M), ("VALUE", N)]
    ),
    "pen_changePenSizeBy": _s("ChangePenSizeBy", "change pen size by {SIZE}", [("SIZE", N)]),
    "pen_setPenSizeTo": _s("SetPenSizeTo", "set pen size to {SIZE}", [("SIZE", N)]),
    "pen_setPenShadeToNumber": _s("SetPenShadeTo", "set pen shade to {SHADE}", [("SHADE", N)]),
    "pen_changePenShadeBy": _s("ChangePenShadeBy", "change pen shade by {SHADE}", [("SHADE", N)]),
    "pen_setPenHueToNumber": _s("SetPenHueTo", "set pen color to {HUE}", [("HUE", N)]),
    "pen_changePenHueBy": _s("ChangePenHueBy", "change pen color by {HUE}", [("HUE", N)]),
}

# kinds with special parsing, listed for completeness of the closed enumeration
CALL_PROCEDURE = "CallProcedure"
UNKNOWN_OPCODE = "UnknownOpcode"

STATEMENT_KINDS = frozenset(spec.kind for spec in STATEMENTS.values()) | {
    CALL_PROCEDURE,
    UNKNOWN_OPCODE,
}

REPORTERS: dict[str, BlockSpec] = {
    "motion_xposition": _r("x position"),
    "motion_yposition": _r("y position"),
    "motion_direction": _r("direction"),
    "looks_costumenumbername": _r("costume [{NUMBER_NAME} v]", fields=["NUMBER_NAME"]),
    "looks_backdropnumbername": _r("backdrop [{NUMBER_NAME} v]", fields=["NUMBER_NAME"]),
    "looks_size": _r("size"),
    "sound_volume": _r("volume"),
    "sensing_touchingobject": _r(
        "touching {TOUCHINGOBJECTMENU} ?", [("TOUCHINGOBJECTMENU", "touch")], boolean=True
    ),
    "sensing_touchingcolor": _r("touching color {COLOR} ?", [("COLOR", C)], boolean=True),
    "sensing_coloristouchingcolor": _r(
        "color {COLOR} is touching {COLOR2} ?", [("COLOR", C), ("COLOR2", C)], boolean=True
    ),
    "sensing_distanceto": _r("distance to {DISTANCETOMENU}", [("DISTANCETOMENU", M)]),
    "sensing_answer": _r("answer", kind="Answer"),
    "sensing_keypressed": _r("key {KEY_OPTION} pressed?", [("KEY_OPTION", M)], boolean=True),
    "sensing_mousedown": _r("mouse down?", boolean=True),
    "sensing_mousex": _r("mouse x"),
    "sensing_mousey": _r("mouse y"),
    "sensing_loudness": _r("loudness"),
    "sensing_timer": _r("timer"),
    "sensing_of": _r("[{PROPERTY} v] of {OBJECT}", [("OBJECT", M)], ["PROPERTY"]),
    "sensing_current": _r("current [{CURRENTMENU} v]", fields=["CURRENTMENU"]),
    "sensing_dayssince2000": _r("days since 2000"),
    "sensing_username": _r("username"),
    "operator_add": _r("{NUM1} + {NUM2}", [("NUM1", N), ("NUM2", N)]),
    "operator_subtract": _r("{NUM1} - {NUM2}", [("NUM1", N), ("NUM2", N)]),
    "operator_multiply": _r("{NUM1} * {NUM2}", [("NUM1", N), ("NUM2", N)]),
    "operator_divide": _r("{NUM1} / {NUM2}", [("NUM1", N), ("NUM2", N)]),
    "operator_mod": _r("{NUM1} mod {NUM2}", [("NUM1", N), ("NUM2", N)]),
    "operator_random": _r("pick random {FROM} to {TO}", [("FROM", N), ("TO", N)]),
    "operator_gt": _r("{OPERAND1} > {OPERAND2}", [("OPERAND1", T), ("OPERAND2", T)], boolean=True, kind="Comparison"),
    "operator_lt": _r("{OPERAND1} < {OPERAND2}", [("OPERAND1", T), ("OPERAND2", T)], boolean=True, kind="Comparison"),
    "operator_equals": _r(
        "{OPERAND1} = {OPERAND2}", [("OPERAND1", T), ("OPERAND2", T)], boolean=True, kind="Comparison"
    ),
    "operator_and": _r("{OPERAND1} and {OPERAND2}", [("OPERAND1", B), ("OPERAND2", B)], boolean=True, kind="BoolOp"),
    "operator_or": _r("{OPERAND1} or {OPERAND2}", [("OPERAND1", B), ("OPERAND2", B)], boolean=True, kind="BoolOp"),
    "operator_not": _r("not {OPERAND}", [("OPERAND", B)], boolean=True, kind="BoolOp"),
    "operator_join": _r("join {STRING1} {STRING2}", [("STRING1", T), ("STRING2", T)]),
    "operator_letter_of": _r("letter {LETTER} of {STRING}", [("LETTER", N), ("STRING", T)]),
    "operator_length": _r("length of {STRING}", [("STRING", T)]),
    "operator_contains": _r("{STRING1} contains {STRING2} ?", [("STRING1", T), ("STRING2", T)], boolean=True),
    "operator_round": _r("round {NUM}", [("NUM", N)]),
    "operator_mathop": _r("[{OPERATOR} v] of {NUM}", [("NUM", N)], ["OPERATOR"]),
    "data_variable": _r("{VARIABLE}", fields=["VARIABLE"], kind="VariableRef"),
    "data_listcontents": _r("{LIST}", fields=["LIST"], kind="ListRef"),
    "data_itemoflist": _r("item {INDEX} of [{LIST} v]", [("INDEX", N)], ["LIST"]),
    "data_itemnumoflist": _r("item # of {ITEM} in [{LIST} v]", [("ITEM", T)], ["LIST"]),
    "data_lengthoflist": _r("length of [{LIST} v]", fields=["LIST"]),
    "data_listcontainsitem": _r("[{LIST} v] contains {ITEM} ?", [("ITEM", T)], ["LIST"], boolean=True),
    "argument_reporter_string_number": _r("{VALUE}", fields=["VALUE"], kind="ParameterRef"),
    "argument_reporter_boolean": _r("{VALUE}", fields=["VALUE"], boolean=True, kind="ParameterRef"),
    "pen_menu_colorParam": _r("{colorParam}", fields=["colorParam"]),
}

COMPARISON_OPS = {"operator_equals": "EQ", "operator_lt": "LT", "operator_gt": "GT"}
BOOL_OPS = {"operator_and": "AND", "operator_or": "OR", "operator_not": "NOT"}

# shadow opcodes whose single field is a literal value
LITERAL_SHADOWS = {
    "math_number": ("NUM", "NumberLiteral"),
    "math_positive_number": ("NUM", "NumberLiteral"),
    "math_whole_number": ("NUM", "NumberLiteral"),
    "math_integer": ("NUM", "NumberLiteral"),
    "math_angle": ("NUM", "NumberLiteral"),
    "text": ("TEXT", "StringLiteral"),
    "colour_picker": ("COLOUR", "ColorLiteral"),
    "event_broadcast_menu": ("BROADCAST_OPTION", "BroadcastRef"),
}

# primitive input codes
PRIMITIVE_KINDS = {
    4: "NumberLiteral",
    5: "NumberLiteral",
    6: "NumberLiteral",
    7: "NumberLiteral",
    8: "NumberLiteral",
    9: "ColorLiteral",
    10: "StringLiteral",
    11: "BroadcastRef",
    12: "VariableRef",
    13: "ListRef",
}

SENSING_CONDITION_OPCODES = frozenset(
    {
        "sensing_touchingobject",
        "sensing_touchingcolor",
        "sensing_coloristouchingcolor",
        "sensing_keypressed",
        "sensing_mousedown",
    }
)

POSITION_REPORTERS = frozenset(
    {
        "motion_xposition",
        "motion_yposition",
        "sensing_mousex",
        "sensing_mousey",
        "sensing_distanceto",
    }
)

CORE_PREFIXES = (
    "motion_",
    "looks_",
    "sound_",
    "event_",
    "control_",
    "sensing_",
    "operator_",
    "data_",
    "procedures_",
    "argument_",
    "pen_",
)


def is_extension_hat(opcode: str) -> bool:
    """Hat blocks of extensions other than pen (e.g. ``makeymakey_whenMakeyKeyPressed``)."""
    if opcode.startswith(CORE_PREFIXES):
        return False
    _, _, name = opcode.partition("_")
    return name.startswith("when")
