import math

from landmark_maximin import GeometryConfig

# 8 m x 19 m placement box, observers anywhere within 15 m of its center
DESK = GeometryConfig.centered(r_a=15.0, r_outer=50.0, half_width=4.0, half_height=9.5,
                               r_res=1.0, beta_res=math.radians(5.0), r_sense=30.0)
