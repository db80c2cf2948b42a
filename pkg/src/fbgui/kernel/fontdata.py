"""Frozen 8x16 glyph bitmaps for printable ASCII (generated file).

One entry per code point 32..126; 16 bytes per glyph, one byte per row,
most significant bit = leftmost pixel. Regenerate with
scripts/gen_fontdata.py."""

GLYPH_W = 8
GLYPH_H = 16

REPLACEMENT = bytes.fromhex("00007e42424242424242427e00000000")

GLYPHS = {
    32: bytes.fromhex("00000000000000000000000000000000"),  # space
    33: bytes.fromhex("00000010101010101000101000000000"),  # !
    34: bytes.fromhex("00000028282800000000000000000000"),  # "
    35: bytes.fromhex("0000000014147e2828fe485000000000"),  # #
    36: bytes.fromhex("00000010387450301c14543c10100000"),  # $
    37: bytes.fromhex("00000060909064104c12120c00000000"),  # %
    38: bytes.fromhex("0000003860602070528a443a00000000"),  # &
    39: bytes.fromhex("00000010101000000000000000000000"),  # '
    40: bytes.fromhex("00000810101010101010101008000000"),  # (
    41: bytes.fromhex("00002010101008080810101020000000"),  # )
    42: bytes.fromhex("00000010543838541000000000000000"),  # *
    43: bytes.fromhex("00000000001010107e10101000000000"),  # +
    44: bytes.fromhex("00000000000000000000101010000000"),  # ,
    45: bytes.fromhex("00000000000000003800000000000000"),  # -
    46: bytes.fromhex("00000000000000000000101000000000"),  # .
    47: bytes.fromhex("00000004040808101020204040000000"),  # /
    48: bytes.fromhex("00000038644444544444643800000000"),  # 0
    49: bytes.fromhex("00000078181818181818183c00000000"),  # 1
    50: bytes.fromhex("000000384c0404081030607c00000000"),  # 2
    51: bytes.fromhex("0000003844040c380404443800000000"),  # 3
    52: bytes.fromhex("0000000818182848487e080800000000"),  # 4
    53: bytes.fromhex("0000007c4040780c04044c3800000000"),  # 5
    54: bytes.fromhex("00000038644058644444643800000000"),  # 6
    55: bytes.fromhex("0000007c040c08081010102000000000"),  # 7
    56: bytes.fromhex("00000038644464384444443800000000"),  # 8
    57: bytes.fromhex("00000038444444443c040c3800000000"),  # 9
    58: bytes.fromhex("00000000000010100000101000000000"),  # :
    59: bytes.fromhex("00000000000010100000101010000000"),  # ;
    60: bytes.fromhex("0000000000061c60601c060000000000"),  # <
    61: bytes.fromhex("000000000000007e007e000000000000"),  # =
    62: bytes.fromhex("000000000040300c0c30400000000000"),  # >
    63: bytes.fromhex("00000038040408101000101000000000"),  # ?
    64: bytes.fromhex("000000003c64429e92929e40601c0000"),  # @
    65: bytes.fromhex("000000103828282c447c46c200000000"),  # A
    66: bytes.fromhex("00000078444444784446447c00000000"),  # B
    67: bytes.fromhex("0000001c204040404040201c00000000"),  # C
    68: bytes.fromhex("000000784c44444444444c7800000000"),  # D
    69: bytes.fromhex("0000007c4040407c4040407c00000000"),  # E
    70: bytes.fromhex("0000007e6060607c6060606000000000"),  # F
    71: bytes.fromhex("0000003c6040404c4444643c00000000"),  # G
    72: bytes.fromhex("000000444444447c4444444400000000"),  # H
    73: bytes.fromhex("0000007c101010101010107c00000000"),  # I
    74: bytes.fromhex("0000003c0c0c0c0c0c0c087800000000"),  # J
    75: bytes.fromhex("000000464c587070484c444600000000"),  # K
    76: bytes.fromhex("00000040404040404040407e00000000"),  # L
    77: bytes.fromhex("000000c6e6eeeadad2c2c2c200000000"),  # M
    78: bytes.fromhex("00000064646454544c4c4c4400000000"),  # N
    79: bytes.fromhex("00000038644444464444643800000000"),  # O
    80: bytes.fromhex("0000007c4446447c4040404000000000"),  # P
    81: bytes.fromhex("0000003864444446444464380c040000"),  # Q
    82: bytes.fromhex("00000078444444784c44464200000000"),  # R
    83: bytes.fromhex("00000038444060380404443800000000"),  # S
    84: bytes.fromhex("000000fe101010101010101000000000"),  # T
    85: bytes.fromhex("00000044444444444444443800000000"),  # U
    86: bytes.fromhex("000000c2444444242828381000000000"),  # V
    87: bytes.fromhex("0000008282925a4a6c6c6c6400000000"),  # W
    88: bytes.fromhex("0000004664281818382c44c200000000"),  # X
    89: bytes.fromhex("000000c6442c38101010101000000000"),  # Y
    90: bytes.fromhex("0000007e040c08101020407e00000000"),  # Z
    91: bytes.fromhex("00001810101010101010101018000000"),  # [
    92: bytes.fromhex("00000040402020101008080404000000"),  # \
    93: bytes.fromhex("00003818181818181818181838000000"),  # ]
    94: bytes.fromhex("00000018284400000000000000000000"),  # ^
    95: bytes.fromhex("0000000000000000000000000000fe00"),  # _
    96: bytes.fromhex("00002010000000000000000000000000"),  # `
    97: bytes.fromhex("00000000007804043c44443400000000"),  # a
    98: bytes.fromhex("00004040405864444444647800000000"),  # b
    99: bytes.fromhex("00000000001c20404040201c00000000"),  # c
    100: bytes.fromhex("00000404043c4c4444444c3400000000"),  # d
    101: bytes.fromhex("00000000003864447e40643800000000"),  # e
    102: bytes.fromhex("00000c10107c10101010101000000000"),  # f
    103: bytes.fromhex("00000000003c4c4444444c34040c3800"),  # g
    104: bytes.fromhex("00004040405864444444444400000000"),  # h
    105: bytes.fromhex("00001000007010101010107c00000000"),  # i
    106: bytes.fromhex("00000800003808080808080818107000"),  # j
    107: bytes.fromhex("00006060606468707868646600000000"),  # k
    108: bytes.fromhex("00007010101010101010101c00000000"),  # l
    109: bytes.fromhex("00000000007c52525252525200000000"),  # m
    110: bytes.fromhex("00000000005864444444444400000000"),  # n
    111: bytes.fromhex("00000000003864444444643800000000"),  # o
    112: bytes.fromhex("00000000007864444444647840404000"),  # p
    113: bytes.fromhex("00000000003c6c4444446c3c04040400"),  # q
    114: bytes.fromhex("00000000003e30202020202000000000"),  # r
    115: bytes.fromhex("00000000003864603804443800000000"),  # s
    116: bytes.fromhex("00000010107c10101010101c00000000"),  # t
    117: bytes.fromhex("00000000004444444444643400000000"),  # u
    118: bytes.fromhex("00000000004444642828381000000000"),  # v
    119: bytes.fromhex("0000000000828252546c6c6400000000"),  # w
    120: bytes.fromhex("00000000004428381038244400000000"),  # x
    121: bytes.fromhex("00000000004644642c28181010106000"),  # y
    122: bytes.fromhex("00000000007c04081020207c00000000"),  # z
    123: bytes.fromhex("00000c1010101070101010100c000000"),  # {
    124: bytes.fromhex("00001010101010101010101010100000"),  # |
    125: bytes.fromhex("000070101010100c1010101070000000"),  # }
    126: bytes.fromhex("00000000000000700c00000000000000"),  # ~
}
